#include "rsq/rates.hpp"

namespace rsq {

ModeRates derive_rates(const SystemConfig& cfg) {
    ModeRates r;
    for (int i = 0; i < kNumModes; ++i) {
        const double gamma_bar = cfg.mode_frequencies[i] / (2.0 * cfg.loaded_q[i]);
        const double gamma_int = cfg.mode_frequencies[i] / (2.0 * cfg.intrinsic_q[i]);
        r.kappa_phantom[i] = 2.0 * gamma_int;
        r.kappa_channel[i] = 2.0 * (gamma_bar - gamma_int);
        // recompose so the identity gamma_bar == (kappa_channel + kappa_phantom)/2
        // holds exactly in floating point (differs from omega/2Q by <= 1 ulp)
        r.gamma_bar[i] = (r.kappa_channel[i] + r.kappa_phantom[i]) / 2.0;
        r.coupling_phase[i] = 0.0;
    }
    return r;
}

double escape_efficiency(const ModeRates& rates, Mode mode) {
    const int i = static_cast<int>(mode);
    return rates.kappa_channel[i] / (2.0 * rates.gamma_bar[i]);
}

} // namespace rsq
