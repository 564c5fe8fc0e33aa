#include "rsq/eigensystem.hpp"

#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rsq/errors.hpp"

namespace rsq {

EigenSystem eigendecompose(const DriftMatrix& mtx)
{
    Eigen::ComplexEigenSolver<Matrix10cd> solver(mtx.m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw PhysicsError("eigendecompose: eigenvalue iteration failed to converge");
    }

    EigenSystem sys;
    sys.lambdas = solver.eigenvalues();
    sys.V = solver.eigenvectors();
    sys.gamma_bar = mtx.gamma_bar;

    const double abscissa = sys.lambdas.real().maxCoeff();
    if (abscissa >= 0.0) {
        std::ostringstream msg;
        msg << "eigendecompose: drift matrix is not strictly stable (spectral abscissa "
            << abscissa << " rad/s >= 0); steady-state fluctuation spectra are undefined "
            << "at this operating point";
        throw PhysicsError(msg.str());
    }

    Eigen::JacobiSVD<Matrix10cd> svd(sys.V);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(9);
    sys.condition_number = s_min > 0.0 ? s_max / s_min
                                       : std::numeric_limits<double>::infinity();
    if (sys.condition_number > 1e10) {
        std::ostringstream msg;
        msg << "eigendecompose: eigenvector basis is ill conditioned (condition number "
            << sys.condition_number << " > 1e10), the matrix is too close to defective "
            << "for spectral closed forms; use the time-domain oracle instead";
        throw IllConditionedError(msg.str());
    }

    // The residual is recorded as a diagnostic rather than gated: exactly on a
    // hot resonance the pump 2x2 blocks are defective (the frame rotation
    // equals the SPM anomalous gain there), which caps the attainable residual
    // near 1e-9 while leaving every sideband quantity intact thanks to the
    // pump-sideband decoupling. Generic operating points reconstruct to
    // better than 1e-12. The condition gate above bounds the downstream
    // closed-form error at ~eps * cond, comfortably inside the 1e-4
    // oracle-agreement budget.
    sys.V_inv = sys.V.inverse();
    const double m_norm = mtx.m.norm();
    sys.reconstruction_residual =
        m_norm > 0.0 ? (sys.V * sys.lambdas.asDiagonal() * sys.V_inv - mtx.m).norm() / m_norm
                     : 0.0;
    return sys;
}

} // namespace rsq
