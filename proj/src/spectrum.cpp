#include "rsq/spectrum.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rsq/errors.hpp"
#include "rsq/oracle.hpp"

namespace rsq {

using cd = std::complex<double>;

std::complex<double> coefficient_A(cd lambda_i, cd lambda_j, double omega)
{
    const cd sum = lambda_i + lambda_j;
    const cd lor = lambda_i * lambda_i + omega * omega;
    const double sum_scale = std::abs(lambda_i) + std::abs(lambda_j);
    const double lor_scale = std::norm(lambda_i) + omega * omega;
    if (std::abs(sum) <= 1e-14 * sum_scale || std::abs(lor) <= 1e-14 * lor_scale ||
        sum_scale == 0.0) {
        std::ostringstream msg;
        msg << "coefficient_A: singular denominator for lambda_i = (" << lambda_i.real()
            << ", " << lambda_i.imag() << "), lambda_j = (" << lambda_j.real() << ", "
            << lambda_j.imag() << "), omega = " << omega;
        throw PhysicsError(msg.str());
    }
    return 4.0 * lambda_i / (sum * lor);
}

SpectrumResult squeezing_spectrum(const EigenSystem& eig, const ModeRates& rates,
                                  const SystemConfig& /*cfg*/, Mode mode,
                                  const std::vector<double>& thetas,
                                  const std::vector<double>& omegas)
{
    const int J = static_cast<int>(mode);
    const double kappa = rates.kappa_channel[J];
    const double phase = rates.coupling_phase[J];
    const cd gauge_m = std::exp(cd(0.0, -2.0 * phase)); // (gamma*)^2 / |gamma|^2
    const cd gauge_p = std::exp(cd(0.0, 2.0 * phase));  // gamma^2 / |gamma|^2

    // Noise-weighted outer products of the inverse-eigenvector columns; the
    // minus/plus variants feed the e^{-2i theta} / e^{+2i theta} sidebands.
    Matrix10cd w_minus = Matrix10cd::Zero();
    Matrix10cd w_plus = Matrix10cd::Zero();
    for (int m = 0; m < kNumModes; ++m) {
        const double gm = eig.gamma_bar[m];
        w_minus += gm * (eig.V_inv.col(m) * eig.V_inv.col(m + 5).transpose());
        w_plus += gm * (eig.V_inv.col(m + 5) * eig.V_inv.col(m).transpose());
    }
    const Vector10cd vJ = eig.V.row(J).transpose();
    const Vector10cd vJ5 = eig.V.row(J + 5).transpose();

    SpectrumResult res;
    res.mode = mode;
    res.omega_grid = omegas;
    res.thetas = thetas;
    res.s_theta.resize(omegas.size());
    res.s_min.resize(omegas.size());
    res.s_max.resize(omegas.size());
    res.theta_opt.resize(omegas.size());
    res.c0.resize(omegas.size());
    res.c2.resize(omegas.size());

    Matrix10cd a;
    for (size_t oi = 0; oi < omegas.size(); ++oi) {
        const double omega = omegas[oi];
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                a(i, j) = coefficient_A(eig.lambdas(i), eig.lambdas(j), omega);

        cd x_minus(0, 0), x_plus(0, 0), c0_sum(0, 0);
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                x_minus += vJ(i) * vJ(j) * a(i, j) * w_minus(i, j);
                x_plus += vJ5(i) * vJ5(j) * a(i, j) * w_plus(i, j);
                c0_sum += vJ5(i) * vJ(j) * (a(i, j) + a(j, i)) * w_minus(i, j);
            }
        }

        const cd c2_minus = -kappa * gauge_m * x_minus;
        const cd c2_plus = -kappa * gauge_p * x_plus;
        if (std::abs(c2_plus - std::conj(c2_minus)) > 1e-9 * (1.0 + std::abs(c2_minus))) {
            std::ostringstream msg;
            msg << "squeezing_spectrum: the two quadrature sidebands disagree ("
                << std::abs(c2_plus - std::conj(c2_minus))
                << " absolute) at omega = " << omega
                << " rad/s; the eigensystem is internally inconsistent";
            throw PhysicsError(msg.str());
        }
        const cd c0_complex = 1.0 + kappa * c0_sum;
        if (std::abs(c0_complex.imag()) > 1e-9 * std::max(1.0, std::abs(c0_complex.real()))) {
            std::ostringstream msg;
            msg << "squeezing_spectrum: non-real C0 (imaginary part "
                << c0_complex.imag() << ") at omega = " << omega << " rad/s";
            throw PhysicsError(msg.str());
        }

        const double c0 = c0_complex.real();
        const cd c2 = 0.5 * (c2_minus + std::conj(c2_plus));
        res.c0[oi] = c0;
        res.c2[oi] = c2;
        res.s_min[oi] = c0 - 2.0 * std::abs(c2);
        res.s_max[oi] = c0 + 2.0 * std::abs(c2);
        res.theta_opt[oi] = 0.5 * std::arg(c2);
        res.s_theta[oi].resize(thetas.size());
        for (size_t ti = 0; ti < thetas.size(); ++ti) {
            const cd rot = std::exp(cd(0.0, -2.0 * thetas[ti]));
            res.s_theta[oi][ti] = c0 + 2.0 * (c2 * rot).real();
        }
    }
    return res;
}

PhotonNumbers photon_numbers(const EigenSystem& eig, const ModeRates& /*rates*/)
{
    PhotonNumbers out;
    for (int J = 0; J < kNumModes; ++J) {
        cd acc(0, 0);
        for (int m = 0; m < kNumModes; ++m) {
            const double gm = eig.gamma_bar[m];
            for (int i = 0; i < 10; ++i) {
                for (int j = 0; j < 10; ++j) {
                    acc += gm * eig.V(J + 5, i) * eig.V_inv(i, m) * eig.V(J, j) *
                           eig.V_inv(j, m + 5) / (eig.lambdas(i) + eig.lambdas(j));
                }
            }
        }
        double n = -2.0 * acc.real();
        if (n < -1e-9) {
            std::ostringstream msg;
            msg << "photon_numbers: mode " << mode_name(static_cast<Mode>(J))
                << " came out at " << n << " photons; eigensystem too inaccurate";
            throw PhysicsError(msg.str());
        }
        out.n[J] = std::max(n, 0.0);
    }
    const double n_s = out.n[static_cast<int>(Mode::s)];
    const double outer = out.n[static_cast<int>(Mode::m)] + out.n[static_cast<int>(Mode::n)];
    out.ratio_outer_to_s =
        n_s > 0.0 ? outer / n_s : std::numeric_limits<double>::quiet_NaN();
    return out;
}

SpectrumResult squeezing_spectrum_robust(const DriftMatrix& mtx, const ModeRates& rates,
                                         const SystemConfig& cfg, Mode mode,
                                         const std::vector<double>& thetas,
                                         const std::vector<double>& omegas,
                                         std::vector<std::string>* warnings)
{
    try {
        return squeezing_spectrum(eigendecompose(mtx), rates, cfg, mode, thetas, omegas);
    } catch (const IllConditionedError& err) {
        if (warnings != nullptr) {
            warnings->push_back(std::string("falling back to the time-domain oracle: ") +
                                err.what());
        }
        SpectrumResult res = time_domain_oracle(mtx, rates, mode, settle_time(mtx), omegas,
                                                thetas.empty() ? 0.0 : thetas[0]);
        // the oracle evaluated one theta; rebuild the full requested set from
        // its C0/C2 decomposition
        res.thetas = thetas;
        for (size_t oi = 0; oi < omegas.size(); ++oi) {
            res.s_theta[oi].resize(thetas.size());
            for (size_t ti = 0; ti < thetas.size(); ++ti) {
                const cd rot = std::exp(cd(0.0, -2.0 * thetas[ti]));
                res.s_theta[oi][ti] = res.c0[oi] + 2.0 * (res.c2[oi] * rot).real();
            }
        }
        return res;
    }
}

} // namespace rsq
