// Closed-form output squeezing spectra S_J(Omega, theta) and intracavity
// photon numbers from the eigendecomposition of the drift matrix.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "rsq/config.hpp"
#include "rsq/eigensystem.hpp"
#include "rsq/rates.hpp"

namespace rsq {

// A_{i,j}(Omega) = 4*lambda_i / ((lambda_i+lambda_j)(lambda_i^2+Omega^2)).
// Throws PhysicsError when either denominator vanishes within 1e-14 relative
// (cannot happen for a strictly stable matrix and real Omega).
std::complex<double> coefficient_A(std::complex<double> lambda_i,
                                   std::complex<double> lambda_j, double omega);

struct SpectrumResult {
    Mode mode = Mode::s;
    std::vector<double> omega_grid;              // rad/s
    std::vector<double> thetas;                  // rad
    std::vector<std::vector<double>> s_theta;    // [omega][theta], shot noise = 1
    std::vector<double> s_min, s_max;            // per-omega quadrature extremes
    std::vector<double> theta_opt;               // per-omega angle of the
                                                 // anti-squeezed quadrature
                                                 // (s_max); s_min sits at
                                                 // theta_opt +- pi/2
    std::vector<double> c0;                      // theta-independent part
    std::vector<std::complex<double>> c2;        // e^{-2i theta} coefficient
};

// S_J(Omega, theta) = C0(Omega) + 2 Re(C2(Omega) e^{-2i theta}) with
// s_min = C0 - 2|C2|, s_max = C0 + 2|C2|, theta_opt = arg(C2)/2. The C2
// coefficient is assembled independently from both quadrature sidebands and
// symmetrized; their disagreement or a non-real C0 beyond 1e-9 is an internal
// inconsistency reported as PhysicsError.
SpectrumResult squeezing_spectrum(const EigenSystem& eig, const ModeRates& rates,
                                  const SystemConfig& cfg, Mode mode,
                                  const std::vector<double>& thetas,
                                  const std::vector<double>& omegas);

struct PhotonNumbers {
    std::array<double, 5> n{};      // steady-state intracavity photons per mode
    double ratio_outer_to_s = 0.0;  // (n_m + n_n)/n_s; NaN when n_s = 0
};

// n_J = -2 sum_m Gamma_bar_m sum_{k',k''} V[J+5,k'] Vinv[k',m] V[J,k'']
//       Vinv[k'',m+5] / (lambda_k' + lambda_k''), clipped to zero when the
// numerical result dips no lower than -1e-9 (beyond that: PhysicsError).
// Caveat: exactly on a hot pump resonance the pump 2x2 blocks of the drift
// matrix are defective, so the pump-mode entries (p1, p2) computed through
// the eigenbasis are ill-determined there (library-dependent at the O(1)
// level); the sideband entries (m, s, n) never couple to the pump blocks and
// stay accurate. oracle_photon_number gives the true pump values when needed.
PhotonNumbers photon_numbers(const EigenSystem& eig, const ModeRates& rates);

// Closed-form spectrum with the documented fallback: when eigendecompose
// reports an ill-conditioned (near-defective) eigenbasis, the time-domain
// oracle evaluates the same spectrum instead and a warning is appended.
SpectrumResult squeezing_spectrum_robust(const DriftMatrix& mtx, const ModeRates& rates,
                                         const SystemConfig& cfg, Mode mode,
                                         const std::vector<double>& thetas,
                                         const std::vector<double>& omegas,
                                         std::vector<std::string>* warnings = nullptr);

} // namespace rsq
