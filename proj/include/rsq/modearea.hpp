// Effective mode area, waveguide nonlinear parameter, and the per-photon
// ring coupling rate, evaluated from a gridded cross-section mode profile.
#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace rsq {

// Rectilinear (y, z) sampling of the ring cross-section. Cylindrical field
// components are stored per node in row-major order, index [iy * nz + iz].
// The field amplitudes need not be normalized: every consumer is invariant
// under rescaling the field by a nonzero complex constant.
struct ModeProfile {
    std::vector<double> y, z;  // strictly increasing axes, m
    std::vector<std::array<std::complex<double>, 3>> e;  // (e_rho, e_phi, e_z)
    std::vector<double> index;        // refractive index n per node
    std::vector<double> chi3_mask;    // chi3 / chi3_bar per node, in [0, 1]
    std::vector<double> group_index;  // optional n_g per node; empty = absent
    double n_bar = 0.0;               // reference index in the core
    double chi3_bar = 0.0;            // reference chi3, m^2/V^2
    double v_ring = 0.0;              // ring group velocity, m/s (only needed
                                      // when group_index is present)
};

enum class Polarization { te, tm, full_vector };

// Loads the plain-text profile written by any mode solver export:
// '#' comments and blank lines are skipped; every other line carries
//   y z re_e_rho im_e_rho re_e_phi im_e_phi re_e_z im_e_z n chi3 [n_g]
// (whitespace-separated, SI units). Rows may come in any order but must
// tile a complete rectangular grid; either all rows carry n_g or none do.
// The reference scalars are material constants supplied by the caller.
// Throws IoError (unreadable file) or ConfigError (malformed content).
ModeProfile load_mode_profile(const std::string& path, double n_bar, double chi3_bar,
                              double v_ring = 0.0);

// Effective area of the mode:
//   1/A = integral( mask * Q ) / ( integral( |e|^2 * w ) )^2
// by trapezoidal quadrature on the grid. For TE the quartic kernel Q is
// |e_rho|^4 and for TM it is |e_z|^4 (dominant-component reduction, unit
// weight w). The full-vector path contracts the isotropic chi3 tensor,
// Q = (|e.e|^2 + 2 |e|^4) / 3 evaluated at the zeta = 0 orientation (the
// contraction is orientation-independent), and weights the normalization
// integrand by w = (n / n_bar) * (v_ring * n_g / c) when a group-index map
// is present, else w = 1.
// Throws ConfigError on a degenerate grid or inconsistent node counts and
// PhysicsError when the field (or its overlap with the nonlinear core)
// vanishes.
double effective_area(const ModeProfile& profile, Polarization pol);

// Kerr index n2 = 3 chi3_bar / (4 n_bar^2 eps0 c), m^2/W.
double nonlinear_index(double n_bar, double chi3_bar);

// Waveguide nonlinear parameter gamma = omega * n2 / (c * A)
//                                     = 3 omega chi3_bar / (4 n_bar^2 eps0 c^2 A).
// Note the 1/4: the source expression for gamma is printed without it, but
// its own worked values (gamma ~ 1 /(W m) for n2 = 2.4e-19 m^2/W at
// A = 1 um^2, and the quoted ring coupling rate they imply) are consistent
// only with the standard n2-based form implemented here; see
// docs/formulas.md.
double waveguide_gamma(double area, double omega, double n_bar, double chi3_bar);

// Per-photon ring coupling rate Lambda = hbar * omega * v^2 * gamma / L,
// with L the ring circumference.
double lambda_coefficient(double gamma, double omega, double v,
                          double circumference);

} // namespace rsq
