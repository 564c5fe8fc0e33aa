// Time-domain oracle: evaluates the output squeezing spectrum and photon
// numbers by numerically propagating the Green's function of the drift matrix
// and integrating the two-time correlators, independently of the
// eigendecomposition route. Used by tests and as the documented fallback for
// near-defective eigensystems.
#pragma once

#include "rsq/drift.hpp"
#include "rsq/rates.hpp"
#include "rsq/spectrum.hpp"

namespace rsq {

// Default settling window 30 decay times of the slowest fluctuation mode
// (covers the polynomial transients of defective blocks as well).
// Throws PhysicsError when the matrix is not strictly stable.
double settle_time(const DriftMatrix& mtx);

// Propagates dG/dt = M G from G(0) = I with an adaptive Dormand-Prince 5(4)
// integrator (relative tolerance 1e-10) over a uniform grid covering
// [0, 2*T_settle], forms the stationary correlators by Simpson quadrature,
// and Fourier-transforms the quadrature autocorrelation. Throws PhysicsError
// when T_settle leaves the autocorrelation above 1e-8 of its peak, or when
// the required grid would exceed the desk-scale node budget.
SpectrumResult time_domain_oracle(const DriftMatrix& mtx, const ModeRates& rates,
                                  Mode mode, double T_settle,
                                  const std::vector<double>& omegas, double theta);

// Steady-state intracavity photon number of one mode via the same correlator
// machinery (the tau = 0 value of the normal-ordered correlator).
double oracle_photon_number(const DriftMatrix& mtx, Mode mode, double T_settle);

} // namespace rsq
