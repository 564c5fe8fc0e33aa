// Linearized fluctuation dynamics: detuning parameters R_J, the 10x10 complex
// drift matrix in the rotating frame, and its linear-stability report.
//
// Row/column ordering: indices 0-4 are the fluctuation operators of modes
// [m, p1, s, p2, n]; indices 5-9 are the conjugate (daggered) operators in the
// same mode order, so mode J's conjugate row is J+5.
#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "rsq/config.hpp"
#include "rsq/pump.hpp"
#include "rsq/rates.hpp"

namespace rsq {

using Matrix10cd = Eigen::Matrix<std::complex<double>, 10, 10>;
using Vector10cd = Eigen::Matrix<std::complex<double>, 10, 1>;

struct DetuningParams {
    std::array<double, 5> R{};         // rad/s, ordered [m, p1, s, p2, n]
    std::array<double, 2> delta_abs{}; // absolute pump detunings that produced R
};

// R_s  = (D1+D2)/2 + (w_p1 + w_p2 - 2 w_s)/2
// R_p1 = D1,  R_p2 = D2
// R_m  = (3D1-D2)/2 + (3 w_p1 - w_p2 - 2 w_m)/2
// R_n  = (3D2-D1)/2 + (3 w_p2 - w_p1 - 2 w_n)/2
DetuningParams detuning_params(const SystemConfig& cfg, double delta_p1, double delta_p2);

struct DriftMatrix {
    Matrix10cd m = Matrix10cd::Zero();
    std::array<double, 5> gamma_bar{}; // noise-source rates of the Langevin terms
    ProcessToggles toggles_used{};
};

// Assemble the matrix from raw ingredients (tests use this to build synthetic
// operating points). Each nonlinear entry is included iff its owning process
// toggle is on:
//   diagonal   -gamma_bar_J + i R_J                      always
//   XPM        +2i*Lambda*(|F1|^2+|F2|^2) on all five diagonals
//   SPM        i*Lambda*F1^2 at (p1,p1+5); i*Lambda*F2^2 at (p2,p2+5)
//   DP-SFWM    2i*Lambda*F1*F2 at (s,s+5)
//   SP-SFWM    i*Lambda*F1^2 at (s,m+5) and (m,s+5); i*Lambda*F2^2 at (s,n+5) and (n,s+5)
//   BS-FWM     2i*Lambda*conj(F1)*F2 at (s,m) and (n,s); 2i*Lambda*conj(F2)*F1 at (s,n) and (m,s);
//              pump exchange 2i*Lambda*conj(F2)*F1 at (p1,p2), 2i*Lambda*conj(F1)*F2 at (p2,p1),
//              2i*Lambda*F1*F2 at (p1,p2+5) and (p2,p1+5)
//   HP-SFWM    2i*Lambda*F1*F2 at (m,n+5) and (n,m+5)
// Conjugate rows follow from M[J+5,K+5] = conj(M[J,K]), M[J+5,K] = conj(M[J,K+5]).
Matrix10cd assemble_drift(const std::array<double, 5>& gamma_bar,
                          const std::array<double, 5>& R,
                          std::complex<double> F_p1, std::complex<double> F_p2,
                          double lambda, const ProcessToggles& toggles);

// Full-pipeline builder; throws PhysicsError if steady.delta_abs disagrees
// with the detunings R was built from (mixed operating points).
DriftMatrix build_drift_matrix(const PumpSteadyState& steady, const DetuningParams& params,
                               const ModeRates& rates, double lambda,
                               const ProcessToggles& toggles);

struct StabilityReport {
    double spectral_abscissa = 0.0; // max Re(eigenvalue), rad/s
    double margin_gamma_s = 0.0;    // -spectral_abscissa / gamma_bar_s
    bool stable = false;
};

StabilityReport stability(const DriftMatrix& mtx);

} // namespace rsq
