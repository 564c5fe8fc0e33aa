// Decay and coupling rates per resonance, derived from quality factors.
#pragma once

#include <array>

#include "rsq/config.hpp"

namespace rsq {

// All rates are angular (rad/s). The ring-channel field coupling gamma_J is
// represented by its modulus-squared-over-velocity kappa_channel = |gamma|^2/v
// plus an explicit phase; the physics is invariant under the phase choice
// (it shifts the optimal local-oscillator angle only), and derive_rates picks
// the real-positive gauge coupling_phase = 0.
struct ModeRates {
    std::array<double, 5> gamma_bar{};     // total field decay rate Gamma_bar_J
    std::array<double, 5> kappa_channel{}; // 2*(Gamma_bar_J - Gamma_int_J)
    std::array<double, 5> kappa_phantom{}; // 2*Gamma_int_J (intrinsic loss port)
    std::array<double, 5> coupling_phase{}; // arg(gamma_J), rad
};

// Gamma_bar_J = omega_J/(2 Q_loaded), Gamma_int_J = omega_J/(2 Q_intrinsic);
// identity gamma_bar == (kappa_channel + kappa_phantom)/2 holds exactly.
ModeRates derive_rates(const SystemConfig& cfg);

// Fraction of generated light that reaches the output channel,
// kappa_channel/(2*gamma_bar).
double escape_efficiency(const ModeRates& rates, Mode mode);

} // namespace rsq
