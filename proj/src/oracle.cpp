#include "rsq/oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "rsq/errors.hpp"

namespace rsq {

namespace {

using cd = std::complex<double>;

// One adaptive Dormand-Prince 5(4) step of dG/dt = M G; returns the actual
// step taken in *h_used and a suggestion for the next step in *h_next.
void dp54_step(const Matrix10cd& m, Matrix10cd& g, double h_try, double h_max,
               double rel_tol, double* h_used, double* h_next)
{
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                            e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640,
                            e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double h = std::min(h_try, h_max);
    for (int attempt = 0; attempt < 50; ++attempt) {
        const Matrix10cd k1 = m * g;
        const Matrix10cd k2 = m * (g + h * (a21 * k1));
        const Matrix10cd k3 = m * (g + h * (a31 * k1 + a32 * k2));
        const Matrix10cd k4 = m * (g + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Matrix10cd k5 = m * (g + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Matrix10cd k6 =
            m * (g + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Matrix10cd g5 = g + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Matrix10cd k7 = m * g5;
        const Matrix10cd err_mtx =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale = std::max(g.cwiseAbs().maxCoeff(), g5.cwiseAbs().maxCoeff());
        const double err = err_mtx.cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
        if (err <= rel_tol || h <= 1e-6 * h_max) {
            g = g5;
            *h_used = h;
            const double grow =
                err > 0.0 ? 0.9 * std::pow(rel_tol / err, 0.2) : 5.0;
            *h_next = h * std::min(5.0, std::max(0.2, grow));
            return;
        }
        h *= std::max(0.2, 0.9 * std::pow(rel_tol / err, 0.2));
    }
    throw PhysicsError("time_domain_oracle: adaptive step size failed to converge");
}

struct Correlators {
    std::vector<cd> p;      // <f_J(t+tau) f_J(t)>-type anomalous correlator
    std::vector<cd> nplus;  // <f_J^dag(t) f_J(t+tau)>-type correlator
    double h = 0.0;         // tau grid spacing
    int n = 0;              // tau nodes span [0, T] with n+1 points, n even
};

// Propagate the Green's function over [0, 2T] and integrate the two
// stationary correlators of mode J on the tau grid [0, T]. extra_scale lets
// the caller fold in the fastest requested Fourier frequency so the tau grid
// resolves it.
Correlators correlators_for_mode(const DriftMatrix& mtx, int J, double T,
                                 double extra_scale)
{
    // Node spacing from the fastest rotation scale; the infinity norm bounds
    // the spectral radius without reusing any eigendecomposition.
    double omega_scale = extra_scale;
    for (int i = 0; i < 10; ++i) {
        double row = 0.0;
        for (int j = 0; j < 10; ++j) row += std::abs(mtx.m(i, j));
        omega_scale = std::max(omega_scale, row);
    }
    if (omega_scale <= 0.0 || T <= 0.0) {
        throw PhysicsError("time_domain_oracle: empty drift matrix or settling window");
    }
    const double h_target = std::min(0.05 / omega_scale, T / 400.0);
    long n_long = static_cast<long>(std::ceil(T / h_target));
    if (n_long % 2 != 0) ++n_long;
    if (n_long > 200000) {
        std::ostringstream msg;
        msg << "time_domain_oracle: settling window " << T << " s needs " << n_long
            << " nodes at resolution " << h_target
            << " s; operating point is too close to instability for a desk-scale oracle";
        throw PhysicsError(msg.str());
    }
    const int n = static_cast<int>(n_long);
    const double h = T / n;

    // Store only the two rows of G the correlators read, one contiguous
    // time series per matrix column so the quadrature loops stream.
    std::array<std::vector<cd>, 10> g_j, g_j5;
    for (int k = 0; k < 10; ++k) {
        g_j[k].resize(2 * n + 1);
        g_j5[k].resize(2 * n + 1);
    }
    Matrix10cd g = Matrix10cd::Identity();
    auto record = [&](int node) {
        for (int k = 0; k < 10; ++k) {
            g_j[k][node] = g(J, k);
            g_j5[k][node] = g(J + 5, k);
        }
    };
    record(0);
    double h_next = h;
    for (int node = 1; node <= 2 * n; ++node) {
        double remaining = h;
        while (remaining > 0.0) {
            double used = 0.0;
            dp54_step(mtx.m, g, std::min(h_next, remaining), remaining, 1e-10, &used,
                      &h_next);
            remaining -= used;
            if (remaining < 1e-14 * h) remaining = 0.0;
        }
        record(node);
    }

    // Simpson weights over s in [0, T], folded into the fixed-time factors.
    std::vector<double> w(n + 1);
    for (int s = 0; s <= n; ++s)
        w[s] = (s == 0 || s == n) ? h / 3.0 : (s % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);

    Correlators out;
    out.h = h;
    out.n = n;
    out.p.assign(n + 1, cd(0, 0));
    out.nplus.assign(n + 1, cd(0, 0));
    std::vector<cd> w_gj_m5(n + 1), w_gj5_m(n + 1);
    for (int m = 0; m < kNumModes; ++m) {
        const double gm = mtx.gamma_bar[m];
        for (int s = 0; s <= n; ++s) {
            w_gj_m5[s] = w[s] * g_j[m + 5][s]; // G[J, m+5](s), weighted
            w_gj5_m[s] = w[s] * g_j5[m][s];    // G[J+5, m](s), weighted
        }
        const cd* shifted_m = g_j[m].data();      // G[J, m](s + tau)
        const cd* shifted_m5 = g_j[m + 5].data(); // G[J, m+5](s + tau)
        for (int tau = 0; tau <= n; ++tau) {
            cd p_sum(0, 0), n_sum(0, 0);
            for (int s = 0; s <= n; ++s) {
                p_sum += shifted_m[s + tau] * w_gj_m5[s];
                n_sum += w_gj5_m[s] * shifted_m5[s + tau];
            }
            out.p[tau] += 2.0 * gm * p_sum;
            out.nplus[tau] += 2.0 * gm * n_sum;
        }
    }
    return out;
}

void check_settled(const Correlators& corr, double T)
{
    double peak = 0.0;
    for (int k = 0; k <= corr.n; ++k)
        peak = std::max(peak, std::abs(corr.p[k]) + std::abs(corr.nplus[k]));
    const double tail = std::abs(corr.p[corr.n]) + std::abs(corr.nplus[corr.n]);
    if (peak > 0.0 && tail > 1e-8 * peak) {
        std::ostringstream msg;
        msg << "time_domain_oracle: autocorrelation at T_settle = " << T
            << " s is still " << tail / peak
            << " of its peak (needs < 1e-8); increase T_settle";
        throw PhysicsError(msg.str());
    }
}

} // namespace

double settle_time(const DriftMatrix& mtx)
{
    StabilityReport rep = stability(mtx);
    if (!rep.stable) {
        throw PhysicsError("time_domain_oracle: drift matrix is not strictly stable");
    }
    // Thirty decay times: wide enough that the polynomial-in-t transients of
    // defective (non-diagonalizable) blocks also fall below the settledness
    // threshold, not just pure exponentials.
    return 30.0 / -rep.spectral_abscissa;
}

SpectrumResult time_domain_oracle(const DriftMatrix& mtx, const ModeRates& rates,
                                  Mode mode, double T_settle,
                                  const std::vector<double>& omegas, double theta)
{
    const int J = static_cast<int>(mode);
    double omega_max = 0.0;
    for (double omega : omegas) omega_max = std::max(omega_max, std::abs(omega));
    Correlators corr = correlators_for_mode(mtx, J, T_settle, omega_max);
    check_settled(corr, T_settle);

    const double kappa = rates.kappa_channel[J];
    const cd gauge_m = std::exp(cd(0.0, -2.0 * rates.coupling_phase[J]));

    // Simpson weights over tau in [0, T].
    std::vector<double> w(corr.n + 1);
    for (int k = 0; k <= corr.n; ++k)
        w[k] = (k == 0 || k == corr.n) ? corr.h / 3.0
                                       : (k % 2 == 1 ? 4.0 * corr.h / 3.0 : 2.0 * corr.h / 3.0);

    SpectrumResult res;
    res.mode = mode;
    res.omega_grid = omegas;
    res.thetas = {theta};
    res.s_theta.resize(omegas.size());
    res.s_min.resize(omegas.size());
    res.s_max.resize(omegas.size());
    res.theta_opt.resize(omegas.size());
    res.c0.resize(omegas.size());
    res.c2.resize(omegas.size());

    for (size_t oi = 0; oi < omegas.size(); ++oi) {
        const double omega = omegas[oi];
        cd ft_p(0, 0), ft_pc(0, 0);
        double ft_n = 0.0;
        for (int k = 0; k <= corr.n; ++k) {
            const cd osc = std::exp(cd(0.0, -omega * corr.h * k));
            ft_p += w[k] * osc * corr.p[k];
            ft_pc += w[k] * osc * std::conj(corr.p[k]);
            ft_n += w[k] * std::cos(omega * corr.h * k) * 2.0 * corr.nplus[k].real();
        }
        const cd c2 = -kappa * gauge_m * (ft_p + std::conj(ft_pc));
        const double c0 = 1.0 + 2.0 * kappa * ft_n;
        res.c0[oi] = c0;
        res.c2[oi] = c2;
        res.s_min[oi] = c0 - 2.0 * std::abs(c2);
        res.s_max[oi] = c0 + 2.0 * std::abs(c2);
        res.theta_opt[oi] = 0.5 * std::arg(c2);
        const cd rot = std::exp(cd(0.0, -2.0 * theta));
        res.s_theta[oi] = {c0 + 2.0 * (c2 * rot).real()};
    }
    return res;
}

double oracle_photon_number(const DriftMatrix& mtx, Mode mode, double T_settle)
{
    Correlators corr = correlators_for_mode(mtx, static_cast<int>(mode), T_settle, 0.0);
    check_settled(corr, T_settle);
    return corr.nplus[0].real();
}

} // namespace rsq
