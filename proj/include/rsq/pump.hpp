// Classical CW steady state of the two pump modes with SPM/XPM, hot-resonance
// location, hot-offset-to-absolute detuning conversion, and bistability scan.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rsq/config.hpp"
#include "rsq/rates.hpp"

namespace rsq {

struct PumpSteadyState {
    std::complex<double> F_p1{};        // intracavity amplitude, |F|^2 = photon number
    std::complex<double> F_p2{};
    std::array<double, 2> delta_abs{};  // absolute detunings used, rad/s
    std::array<double, 2> delta_eff{};  // Lorentzian offsets delta = Delta + shift, rad/s
    std::array<double, 2> spm_shift{};  // Lambda*(|F_self|^2 + 2|F_other|^2) per pump
    double spm_shift_U = 0.0;           // U = -Lambda*|F_p1|^2, rad/s
    std::array<double, 2> energies{};   // hbar*omega*|F|^2, J
    double residual = 0.0;              // relative residual of the classical equations
    bool stable = true;                 // linear stability of the pump subsystem
};

// Input-channel drive amplitude C_L = sqrt(P / (v_L hbar omega_L)).
double drive_amplitude(double power, Mode pump, const ModeRates& rates,
                       const SystemConfig& cfg);

// Solve 0 = -(gamma_bar - i*Lambda*(|F_self|^2 + 2|F_other|^2) - i*Delta)F
//            - i*conj(gamma)*C  for both pumps at absolute detunings, by power
// continuation from F=0 with damped Newton refinement (step halving, up to 40
// halvings; convergence = relative residual < 1e-12). Always returns the
// branch continuously connected to F=0. Throws PhysicsError on
// no-convergence or when the Jacobian turns singular (fold).
PumpSteadyState solve_steady_state(const SystemConfig& cfg, const ModeRates& rates,
                                   double delta_p1, double delta_p2,
                                   double power_p1, double power_p2);

// Self-consistent hot resonance: Delta_p = -Lambda*(|F_self|^2 + 2|F_other|^2),
// by relaxed fixed-point iteration (factor 0.5, tolerance 1e-6 relative on
// Delta), seeded with the closed-form on-resonance photon numbers.
std::array<double, 2> find_hot_detuning(const SystemConfig& cfg, const ModeRates& rates,
                                        double power_p1, double power_p2);

// Interpret cfg.detunings per cfg.detuning_mode and return absolute detunings.
// hot_offset mode solves Delta_p = delta_p - Lambda*(|F_self|^2 + 2|F_other|^2)
// with the same fixed-point scheme as find_hot_detuning.
std::array<double, 2> resolve_detunings(const SystemConfig& cfg, const ModeRates& rates);

// Full pipeline: resolve detunings, split cfg.pump_total_power, solve.
PumpSteadyState pump_steady_state(const SystemConfig& cfg, const ModeRates& rates);

struct ContinuationPoint {
    double power_total = 0.0;
    std::complex<double> F_p1{}, F_p2{};
    bool converged = false;
    bool stable = false;
};

struct ContinuationBranch {
    std::vector<ContinuationPoint> points;
    int first_fold_index = -1; // -1 when no fold/instability encountered
    bool fold_detected() const { return first_fold_index >= 0; }
};

// Ramp total power over a monotone grid at fixed absolute detunings (resolved
// once from cfg), tracking the branch from F=0 and flagging the first fold or
// instability. Reports, never throws.
ContinuationBranch continuation_scan(const SystemConfig& cfg, const ModeRates& rates,
                                     const std::vector<double>& powers_total);

// Analytic fold photon numbers for the symmetric equal-power branch, where
// each pump sees the effective shift 3*Lambda*y: the turning points solve
// 27 L^2 y^2 + 12 L D y + (G^2 + D^2) = 0. Returns false when no fold exists
// (requires delta_abs < -sqrt(3)*gamma_bar and Lambda > 0).
bool symmetric_fold_photon_numbers(double gamma_bar, double lambda, double delta_abs,
                                   double* y_lower, double* y_upper);

} // namespace rsq
