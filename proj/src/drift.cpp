#include "rsq/drift.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rsq/errors.hpp"

namespace rsq {

namespace {

constexpr int kM = static_cast<int>(Mode::m);
constexpr int kP1 = static_cast<int>(Mode::p1);
constexpr int kS = static_cast<int>(Mode::s);
constexpr int kP2 = static_cast<int>(Mode::p2);
constexpr int kN = static_cast<int>(Mode::n);

} // namespace

DetuningParams detuning_params(const SystemConfig& cfg, double delta_p1, double delta_p2)
{
    const double w_m = cfg.mode_frequencies[kM];
    const double w_p1 = cfg.mode_frequencies[kP1];
    const double w_s = cfg.mode_frequencies[kS];
    const double w_p2 = cfg.mode_frequencies[kP2];
    const double w_n = cfg.mode_frequencies[kN];

    DetuningParams out;
    out.delta_abs = {delta_p1, delta_p2};
    out.R[kP1] = delta_p1;
    out.R[kP2] = delta_p2;
    out.R[kS] = 0.5 * (delta_p1 + delta_p2) + 0.5 * (w_p1 + w_p2 - 2.0 * w_s);
    out.R[kM] = 0.5 * (3.0 * delta_p1 - delta_p2) + 0.5 * (3.0 * w_p1 - w_p2 - 2.0 * w_m);
    out.R[kN] = 0.5 * (3.0 * delta_p2 - delta_p1) + 0.5 * (3.0 * w_p2 - w_p1 - 2.0 * w_n);
    return out;
}

Matrix10cd assemble_drift(const std::array<double, 5>& gamma_bar,
                          const std::array<double, 5>& R,
                          std::complex<double> F_p1, std::complex<double> F_p2,
                          double lambda, const ProcessToggles& toggles)
{
    using cd = std::complex<double>;
    const cd il(0.0, lambda);
    const cd F1 = F_p1;
    const cd F2 = F_p2;

    Matrix10cd a = Matrix10cd::Zero();

    for (int j = 0; j < kNumModes; ++j) {
        a(j, j) = cd(-gamma_bar[j], R[j]);
    }
    if (toggles.xpm) {
        const double total = std::norm(F1) + std::norm(F2);
        for (int j = 0; j < kNumModes; ++j) {
            a(j, j) += 2.0 * il * total;
        }
    }
    if (toggles.spm) {
        a(kP1, kP1 + 5) += il * F1 * F1;
        a(kP2, kP2 + 5) += il * F2 * F2;
    }
    if (toggles.dp_sfwm) {
        a(kS, kS + 5) += 2.0 * il * F1 * F2;
    }
    if (toggles.sp_sfwm) {
        a(kS, kM + 5) += il * F1 * F1;
        a(kS, kN + 5) += il * F2 * F2;
        a(kM, kS + 5) += il * F1 * F1;
        a(kN, kS + 5) += il * F2 * F2;
    }
    if (toggles.bs_fwm) {
        a(kS, kM) += 2.0 * il * std::conj(F1) * F2;
        a(kS, kN) += 2.0 * il * std::conj(F2) * F1;
        a(kM, kS) += 2.0 * il * std::conj(F2) * F1;
        a(kN, kS) += 2.0 * il * std::conj(F1) * F2;
        a(kP1, kP2) += 2.0 * il * std::conj(F2) * F1;
        a(kP2, kP1) += 2.0 * il * std::conj(F1) * F2;
        a(kP1, kP2 + 5) += 2.0 * il * F1 * F2;
        a(kP2, kP1 + 5) += 2.0 * il * F1 * F2;
    }
    if (toggles.hp_sfwm) {
        a(kM, kN + 5) += 2.0 * il * F1 * F2;
        a(kN, kM + 5) += 2.0 * il * F1 * F2;
    }

    // Conjugate rows: the daggered operators obey the conjugated equations.
    for (int j = 0; j < kNumModes; ++j) {
        for (int k = 0; k < kNumModes; ++k) {
            a(j + 5, k + 5) = std::conj(a(j, k));
            a(j + 5, k) = std::conj(a(j, k + 5));
        }
    }
    return a;
}

DriftMatrix build_drift_matrix(const PumpSteadyState& steady, const DetuningParams& params,
                               const ModeRates& rates, double lambda,
                               const ProcessToggles& toggles)
{
    const double scale = std::abs(params.delta_abs[0]) + std::abs(params.delta_abs[1]) +
                         rates.gamma_bar[kS];
    for (int p = 0; p < 2; ++p) {
        if (std::abs(steady.delta_abs[p] - params.delta_abs[p]) > 1e-9 * scale) {
            std::ostringstream msg;
            msg << "drift matrix: steady state was solved at pump detunings ("
                << steady.delta_abs[0] << ", " << steady.delta_abs[1]
                << ") rad/s but the detuning parameters were built for ("
                << params.delta_abs[0] << ", " << params.delta_abs[1]
                << ") rad/s; both must come from the same operating point";
            throw PhysicsError(msg.str());
        }
    }

    DriftMatrix out;
    out.m = assemble_drift(rates.gamma_bar, params.R, steady.F_p1, steady.F_p2, lambda, toggles);
    out.gamma_bar = rates.gamma_bar;
    out.toggles_used = toggles;
    return out;
}

StabilityReport stability(const DriftMatrix& mtx)
{
    Eigen::ComplexEigenSolver<Matrix10cd> solver(mtx.m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw PhysicsError("drift matrix: eigenvalue iteration failed to converge");
    }

    StabilityReport report;
    report.spectral_abscissa = solver.eigenvalues().real().maxCoeff();
    const double gs = mtx.gamma_bar[kS];
    report.margin_gamma_s = gs > 0.0 ? -report.spectral_abscissa / gs : 0.0;
    report.stable = report.spectral_abscissa < 0.0;
    return report;
}

} // namespace rsq
