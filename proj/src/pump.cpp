#include "rsq/pump.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rsq/constants.hpp"

namespace rsq {

namespace {

using constants::hbar;
using std::complex;
constexpr complex<double> I{0.0, 1.0};

// Everything the classical two-pump problem needs, in pump-local indexing
// (0 = p1, 1 = p2).
struct ClassicalProblem {
    double gamma_bar[2];
    double delta[2];          // absolute detunings
    double lambda_spm;        // Lambda if SPM enabled else 0
    double lambda_xpm;        // Lambda if XPM enabled else 0
    complex<double> drive[2]; // -i * conj(gamma_L) * C_L
};

ClassicalProblem make_problem(const SystemConfig& cfg, const ModeRates& rates,
                              double delta_p1, double delta_p2,
                              double power_p1, double power_p2) {
    ClassicalProblem pb;
    const Mode pumps[2] = {Mode::p1, Mode::p2};
    const double powers[2] = {power_p1, power_p2};
    pb.delta[0] = delta_p1;
    pb.delta[1] = delta_p2;
    pb.lambda_spm = cfg.toggles.spm ? cfg.lambda_coeff : 0.0;
    pb.lambda_xpm = cfg.toggles.xpm ? cfg.lambda_coeff : 0.0;
    for (int l = 0; l < 2; ++l) {
        const int j = static_cast<int>(pumps[l]);
        pb.gamma_bar[l] = rates.gamma_bar[j];
        const double c_l = drive_amplitude(powers[l], pumps[l], rates, cfg);
        const complex<double> gamma_coupling =
            std::sqrt(rates.kappa_channel[j] * cfg.group_velocity_channel[j]) *
            std::exp(I * rates.coupling_phase[j]);
        pb.drive[l] = -I * std::conj(gamma_coupling) * c_l;
    }
    return pb;
}

// SPM+XPM frequency shift seen by pump l at the given field amplitudes.
double shift_of(const ClassicalProblem& pb, const complex<double> F[2], int l) {
    return pb.lambda_spm * std::norm(F[l]) + 2.0 * pb.lambda_xpm * std::norm(F[1 - l]);
}

// phi_l = dF_l/dt at the candidate steady state; zero at a solution.
void residual(const ClassicalProblem& pb, const complex<double> F[2], complex<double> phi[2]) {
    for (int l = 0; l < 2; ++l) {
        const double shift = shift_of(pb, F, l);
        phi[l] = -(pb.gamma_bar[l] - I * (shift + pb.delta[l])) * F[l] + pb.drive[l];
    }
}

double residual_scale(const ClassicalProblem& pb, const complex<double> F[2]) {
    const double drive_norm = std::abs(pb.drive[0]) + std::abs(pb.drive[1]);
    const double decay_norm =
        pb.gamma_bar[0] * std::abs(F[0]) + pb.gamma_bar[1] * std::abs(F[1]);
    return std::max(drive_norm, decay_norm);
}

double relative_residual(const ClassicalProblem& pb, const complex<double> F[2]) {
    complex<double> phi[2];
    residual(pb, F, phi);
    const double norm = std::hypot(std::abs(phi[0]), std::abs(phi[1]));
    const double scale = residual_scale(pb, F);
    return scale > 0 ? norm / scale : norm;
}

// Real 4x4 Jacobian of (Re phi1, Im phi1, Re phi2, Im phi2) with respect to
// (Re F1, Im F1, Re F2, Im F2); this is also the linear-stability matrix of
// the pump subsystem.
Eigen::Matrix4d real_jacobian(const ClassicalProblem& pb, const complex<double> F[2]) {
    // holomorphic (d/dF) and antiholomorphic (d/dF*) blocks
    complex<double> A[2][2], B[2][2];
    for (int l = 0; l < 2; ++l) {
        const int o = 1 - l;
        A[l][l] = -pb.gamma_bar[l] + I * pb.delta[l] +
                  2.0 * I * pb.lambda_spm * std::norm(F[l]) +
                  2.0 * I * pb.lambda_xpm * std::norm(F[o]);
        B[l][l] = I * pb.lambda_spm * F[l] * F[l];
        A[l][o] = 2.0 * I * pb.lambda_xpm * std::conj(F[o]) * F[l];
        B[l][o] = 2.0 * I * pb.lambda_xpm * F[o] * F[l];
    }
    Eigen::Matrix4d J;
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            const complex<double> sum = A[k][l] + B[k][l];
            const complex<double> dif = A[k][l] - B[k][l];
            J(2 * k, 2 * l) = sum.real();
            J(2 * k, 2 * l + 1) = -dif.imag();
            J(2 * k + 1, 2 * l) = sum.imag();
            J(2 * k + 1, 2 * l + 1) = dif.real();
        }
    }
    return J;
}

bool jacobian_stable(const ClassicalProblem& pb, const complex<double> F[2]) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(real_jacobian(pb, F), false);
    return es.eigenvalues().real().maxCoeff() < 0.0;
}

std::string format_power(double watts) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g mW", watts * 1e3);
    return buf;
}

// Damped Newton from the given start; refines in place. Throws PhysicsError
// on singular Jacobian (fold) or no convergence.
void newton_refine(const ClassicalProblem& pb, complex<double> F[2], double power_total) {
    constexpr double kTol = 1e-12;
    constexpr int kMaxIterations = 100;
    constexpr int kMaxHalvings = 40;

    double rel = relative_residual(pb, F);
    for (int it = 0; it < kMaxIterations; ++it) {
        if (rel < kTol) return;
        const Eigen::Matrix4d J = real_jacobian(pb, F);
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (!(sv(0) > 0) || sv(3) < 1e-13 * sv(0))
            throw PhysicsError("pump steady state: Jacobian singular near total power " +
                               format_power(power_total) + " (fold / bistability onset)");
        complex<double> phi[2];
        residual(pb, F, phi);
        Eigen::Vector4d rhs;
        rhs << -phi[0].real(), -phi[0].imag(), -phi[1].real(), -phi[1].imag();
        const Eigen::Vector4d dx = svd.solve(rhs);

        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h <= kMaxHalvings; ++h) {
            complex<double> Ftry[2] = {F[0] + alpha * complex<double>(dx(0), dx(1)),
                                       F[1] + alpha * complex<double>(dx(2), dx(3))};
            const double rel_try = relative_residual(pb, Ftry);
            if (rel_try < rel) {
                F[0] = Ftry[0];
                F[1] = Ftry[1];
                rel = rel_try;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3e", rel);
            throw PhysicsError(std::string("pump steady state: damped Newton stalled "
                                           "(last relative residual ") + buf + ")");
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", rel);
    throw PhysicsError(std::string("pump steady state: no convergence after 100 iterations "
                                   "(last relative residual ") + buf + ")");
}

// Continuation from F=0: quadratic power ramp (linear in drive amplitude),
// guarding against branch jumps so the returned state is always on the branch
// connected to F=0.
void solve_from_zero(const SystemConfig& cfg, const ModeRates& rates,
                     double delta_p1, double delta_p2,
                     double power_p1, double power_p2, complex<double> F[2]) {
    constexpr int kSteps = 12;
    F[0] = F[1] = 0.0;
    double prev_photons = 0.0;
    double prev_frac = 0.0;
    for (int k = 1; k <= kSteps; ++k) {
        const double frac = static_cast<double>(k) * k / (kSteps * kSteps);
        const ClassicalProblem pb = make_problem(cfg, rates, delta_p1, delta_p2,
                                                 frac * power_p1, frac * power_p2);
        if (k == 1) {
            // linear-cavity guess at the first ramp point
            for (int l = 0; l < 2; ++l)
                F[l] = pb.drive[l] / (pb.gamma_bar[l] - I * pb.delta[l]);
        }
        newton_refine(pb, F, frac * (power_p1 + power_p2));
        const double photons = std::norm(F[0]) + std::norm(F[1]);
        if (k > 1 && prev_photons > 0 &&
            photons > 10.0 * prev_photons * (frac / prev_frac))
            throw PhysicsError("pump steady state: branch jump during power continuation "
                               "near total power " +
                               format_power(frac * (power_p1 + power_p2)) +
                               " (fold / bistability onset)");
        prev_photons = photons;
        prev_frac = frac;
    }
}

PumpSteadyState package_state(const SystemConfig& cfg, const ClassicalProblem& pb,
                              const complex<double> F[2]) {
    PumpSteadyState st;
    st.F_p1 = F[0];
    st.F_p2 = F[1];
    st.delta_abs = {pb.delta[0], pb.delta[1]};
    for (int l = 0; l < 2; ++l) {
        st.spm_shift[l] = shift_of(pb, F, l);
        st.delta_eff[l] = pb.delta[l] + st.spm_shift[l];
    }
    st.spm_shift_U = -cfg.lambda_coeff * std::norm(F[0]);
    st.energies = {hbar * cfg.mode_frequencies[static_cast<int>(Mode::p1)] * std::norm(F[0]),
                   hbar * cfg.mode_frequencies[static_cast<int>(Mode::p2)] * std::norm(F[1])};
    st.residual = relative_residual(pb, F);
    st.stable = jacobian_stable(pb, F);
    return st;
}

} // namespace

double drive_amplitude(double power, Mode pump, const ModeRates& /*rates*/,
                       const SystemConfig& cfg) {
    if (power < 0) throw PhysicsError("drive_amplitude: negative power");
    const int j = static_cast<int>(pump);
    return std::sqrt(power / (cfg.group_velocity_channel[j] * hbar * cfg.mode_frequencies[j]));
}

PumpSteadyState solve_steady_state(const SystemConfig& cfg, const ModeRates& rates,
                                   double delta_p1, double delta_p2,
                                   double power_p1, double power_p2) {
    complex<double> F[2];
    solve_from_zero(cfg, rates, delta_p1, delta_p2, power_p1, power_p2, F);
    const ClassicalProblem pb =
        make_problem(cfg, rates, delta_p1, delta_p2, power_p1, power_p2);
    return package_state(cfg, pb, F);
}

namespace {

// Shared fixed-point driver: Delta_p = offset_p - shift_p(F(Delta)), relaxed
// by 0.5, tolerance 1e-6 relative on Delta.
std::array<double, 2> hot_fixed_point(const SystemConfig& cfg, const ModeRates& rates,
                                      double power_p1, double power_p2,
                                      const std::array<double, 2>& offset) {
    constexpr double kRelax = 0.5;
    constexpr double kTol = 1e-6;
    constexpr int kMaxIterations = 500;

    const double lam_spm = cfg.toggles.spm ? cfg.lambda_coeff : 0.0;
    const double lam_xpm = cfg.toggles.xpm ? cfg.lambda_coeff : 0.0;
    const Mode pumps[2] = {Mode::p1, Mode::p2};
    const double powers[2] = {power_p1, power_p2};

    // Closed-form seed: at effective Lorentzian offset delta the photon number
    // is kappa*P/(hbar*omega*(gamma_bar^2 + delta^2)) independent of the shift.
    double photons[2];
    for (int l = 0; l < 2; ++l) {
        const int j = static_cast<int>(pumps[l]);
        photons[l] = rates.kappa_channel[j] * powers[l] /
                     (hbar * cfg.mode_frequencies[j] *
                      (rates.gamma_bar[j] * rates.gamma_bar[j] + offset[l] * offset[l]));
    }
    std::array<double, 2> delta{};
    for (int l = 0; l < 2; ++l)
        delta[l] = offset[l] - (lam_spm * photons[l] + 2.0 * lam_xpm * photons[1 - l]);

    double last_change = 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        const PumpSteadyState st =
            solve_steady_state(cfg, rates, delta[0], delta[1], power_p1, power_p2);
        const std::array<double, 2> next = {offset[0] - st.spm_shift[0],
                                            offset[1] - st.spm_shift[1]};
        double change = 0.0, scale = 0.0;
        for (int l = 0; l < 2; ++l) {
            change = std::max(change, std::abs(next[l] - delta[l]));
            scale = std::max({scale, std::abs(next[l]), std::abs(delta[l])});
        }
        last_change = change;
        if (change <= kTol * std::max(scale, DBL_MIN)) return next;
        for (int l = 0; l < 2; ++l)
            delta[l] = (1.0 - kRelax) * delta[l] + kRelax * next[l];
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "last delta (%.9g, %.9g) rad/s, last change %.3e",
                  delta[0], delta[1], last_change);
    throw PhysicsError(std::string("hot-detuning fixed point: no convergence after 500 "
                                   "iterations; ") + buf);
}

} // namespace

std::array<double, 2> find_hot_detuning(const SystemConfig& cfg, const ModeRates& rates,
                                        double power_p1, double power_p2) {
    return hot_fixed_point(cfg, rates, power_p1, power_p2, {0.0, 0.0});
}

std::array<double, 2> resolve_detunings(const SystemConfig& cfg, const ModeRates& rates) {
    if (cfg.detuning_mode == DetuningMode::absolute_detuning) return cfg.detunings;
    const double p1 = cfg.pump_total_power * cfg.pump_split;
    const double p2 = cfg.pump_total_power * (1.0 - cfg.pump_split);
    return hot_fixed_point(cfg, rates, p1, p2, cfg.detunings);
}

PumpSteadyState pump_steady_state(const SystemConfig& cfg, const ModeRates& rates) {
    const std::array<double, 2> delta = resolve_detunings(cfg, rates);
    const double p1 = cfg.pump_total_power * cfg.pump_split;
    const double p2 = cfg.pump_total_power * (1.0 - cfg.pump_split);
    return solve_steady_state(cfg, rates, delta[0], delta[1], p1, p2);
}

ContinuationBranch continuation_scan(const SystemConfig& cfg, const ModeRates& rates,
                                     const std::vector<double>& powers_total) {
    ContinuationBranch branch;
    branch.points.reserve(powers_total.size());

    // Freeze absolute detunings at the config's nominal operating point, then
    // ramp power; folds live in absolute-detuning coordinates.
    std::array<double, 2> delta{};
    try {
        delta = resolve_detunings(cfg, rates);
    } catch (const PhysicsError&) {
        delta = cfg.detunings; // fall back to raw values; scan still reports
    }

    double prev_photons = -1.0;
    double prev_power = 0.0;
    for (size_t i = 0; i < powers_total.size(); ++i) {
        const double p = powers_total[i];
        ContinuationPoint pt;
        pt.power_total = p;
        try {
            const PumpSteadyState st = solve_steady_state(
                cfg, rates, delta[0], delta[1], p * cfg.pump_split, p * (1.0 - cfg.pump_split));
            pt.F_p1 = st.F_p1;
            pt.F_p2 = st.F_p2;
            pt.converged = true;
            pt.stable = st.stable;
            const double photons = std::norm(st.F_p1) + std::norm(st.F_p2);
            const bool jumped = prev_photons > 0 && prev_power > 0 &&
                                photons > 10.0 * prev_photons * (p / prev_power);
            if (branch.first_fold_index < 0 && (!pt.stable || jumped))
                branch.first_fold_index = static_cast<int>(i);
            prev_photons = photons;
            prev_power = p;
        } catch (const PhysicsError&) {
            pt.converged = false;
            pt.stable = false;
            if (branch.first_fold_index < 0)
                branch.first_fold_index = static_cast<int>(i);
        }
        branch.points.push_back(pt);
    }
    return branch;
}

bool symmetric_fold_photon_numbers(double gamma_bar, double lambda, double delta_abs,
                                   double* y_lower, double* y_upper) {
    if (lambda <= 0) return false;
    const double disc = delta_abs * delta_abs - 3.0 * gamma_bar * gamma_bar;
    if (delta_abs >= 0 || disc < 0) return false;
    const double root = std::sqrt(disc);
    if (y_lower) *y_lower = (-2.0 * delta_abs - root) / (9.0 * lambda);
    if (y_upper) *y_upper = (-2.0 * delta_abs + root) / (9.0 * lambda);
    return true;
}

} // namespace rsq
