#include "rsq/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "rsq/constants.hpp"
#include "rsq/drift.hpp"
#include "rsq/eigensystem.hpp"
#include "rsq/errors.hpp"
#include "rsq/oracle.hpp"
#include "rsq/pump.hpp"
#include "rsq/rates.hpp"

namespace rsq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Index-partitioned worker pool: thread t handles the contiguous block
// [t*n/T, (t+1)*n/T), results land in preallocated slots, so the output is
// identical for every thread count. fn must confine per-item failures to its
// own slot; anything it does throw is rethrown (lowest thread first) after
// the join.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn)
{
    size_t pool = threads > 0 ? static_cast<size_t>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    pool = std::min(pool, n);
    if (pool <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(pool);
    std::vector<std::thread> workers;
    workers.reserve(pool);
    for (size_t t = 0; t < pool; ++t) {
        const size_t lo = n * t / pool, hi = n * (t + 1) / pool;
        workers.emplace_back([&, t, lo, hi] {
            try {
                for (size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string mhz(double omega)
{
    std::ostringstream ss;
    ss << omega / (constants::two_pi * 1e6) << " MHz";
    return ss.str();
}

// Evaluation of one operating point: pumps driven with total power
// power_watt at hot-resonance offsets (off1, off2), fluctuations per
// `toggles`. Returns the Omega = 0 extremes of the s-mode spectrum plus the
// classical steady state; the sideband photon ratio is filled on request.
// Near-defective eigensystems fall through to the time-domain oracle;
// instability and pump folds surface as PhysicsError for the caller's
// per-point handling.
struct PointEval {
    double s_min0 = 1.0, s_max0 = 1.0;
    double ratio = kNaN;
    PumpSteadyState steady;
};

PointEval evaluate_offsets(const SystemConfig& base, const ModeRates& rates,
                           double off1, double off2, double power_watt,
                           const ProcessToggles& toggles, bool want_ratio)
{
    SystemConfig cfg = base;
    cfg.detuning_mode = DetuningMode::hot_offset;
    cfg.detunings = {off1, off2};
    cfg.pump_total_power = power_watt;
    cfg.toggles = toggles;

    PointEval out;
    out.steady = pump_steady_state(cfg, rates);
    const DetuningParams params =
        detuning_params(cfg, out.steady.delta_abs[0], out.steady.delta_abs[1]);
    const DriftMatrix mtx =
        build_drift_matrix(out.steady, params, rates, cfg.lambda_coeff, cfg.toggles);

    const std::vector<double> zero{0.0};
    const SpectrumResult sp =
        squeezing_spectrum_robust(mtx, rates, cfg, Mode::s, {}, zero, nullptr);
    out.s_min0 = sp.s_min[0];
    out.s_max0 = sp.s_max[0];

    if (want_ratio) {
        try {
            const PhotonNumbers pn = photon_numbers(eigendecompose(mtx), rates);
            out.ratio = pn.ratio_outer_to_s;
        } catch (const IllConditionedError&) {
            const double T = settle_time(mtx);
            const double nm = oracle_photon_number(mtx, Mode::m, T);
            const double ns = oracle_photon_number(mtx, Mode::s, T);
            const double nn = oracle_photon_number(mtx, Mode::n, T);
            out.ratio = ns > 0.0 ? (nm + nn) / ns : kNaN;
        }
    }
    return out;
}

// The requested sideband grid with Omega = 0 guaranteed present (prepended
// when missing) so the scalar extremes always have a home.
std::vector<double> grid_with_zero(const std::vector<double>& omegas)
{
    std::vector<double> grid = omegas;
    if (std::find(grid.begin(), grid.end(), 0.0) == grid.end())
        grid.insert(grid.begin(), 0.0);
    return grid;
}

size_t zero_index(const std::vector<double>& grid)
{
    return static_cast<size_t>(
        std::find(grid.begin(), grid.end(), 0.0) - grid.begin());
}

void check_finite_omegas(const std::vector<double>& omegas)
{
    for (double w : omegas)
        if (!std::isfinite(w))
            throw ConfigError("sideband evaluation points must be finite");
}

} // namespace

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watt_to_dbm(double watt)
{
    if (watt <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(watt / 1e-3);
}

std::vector<double> axis_grid(const AxisSpec& axis)
{
    if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi))
        throw ConfigError("axis range must be finite");
    if (axis.count < 1)
        throw ConfigError("axis point count must be at least 1, got " +
                          std::to_string(axis.count));
    if (axis.hi < axis.lo)
        throw ConfigError("axis range must have hi >= lo");
    if (axis.count > 1 && axis.hi == axis.lo)
        throw ConfigError("axis with more than one point must have hi > lo");
    std::vector<double> grid(static_cast<size_t>(axis.count));
    if (axis.count == 1) {
        grid[0] = axis.lo;
        return grid;
    }
    for (int i = 0; i < axis.count; ++i)
        grid[static_cast<size_t>(i)] =
            axis.lo + (axis.hi - axis.lo) * i / (axis.count - 1);
    return grid;
}

void validate_sweep_spec(const SweepSpec& spec)
{
    axis_grid(spec.axis1);
    if (spec.kind == SweepKind::detuning_map) axis_grid(spec.axis2);
    if (spec.constraint.kind != ConstraintKind::none &&
        !(spec.constraint.value > 0.0))
        throw ConfigError("constraint value must be positive");
    if (spec.kind == SweepKind::symmetric_constrained &&
        spec.constraint.kind == ConstraintKind::none)
        throw ConfigError("symmetric sweep requires a constraint");
    check_finite_omegas(spec.omegas);
}

// ---------------------------------------------------------------------------

std::vector<PowerSweepRow> sweep_power(const SystemConfig& cfg,
                                       const std::vector<double>& powers_dbm,
                                       const std::vector<double>& omegas,
                                       int threads)
{
    for (double p : powers_dbm)
        if (std::isnan(p))
            throw ConfigError("power list contains NaN");
    check_finite_omegas(omegas);
    const ModeRates rates = derive_rates(cfg);
    const std::vector<double> grid = grid_with_zero(omegas);
    const size_t zi = zero_index(grid);

    std::vector<PowerSweepRow> rows(powers_dbm.size());
    parallel_for(rows.size(), threads, [&](size_t i) {
        PowerSweepRow& row = rows[i];
        row.power_dbm = powers_dbm[i];
        row.power_watt = dbm_to_watt(powers_dbm[i]);
        try {
            SystemConfig wcfg = cfg;
            wcfg.detuning_mode = DetuningMode::hot_offset;
            wcfg.detunings = {0.0, 0.0};
            wcfg.pump_total_power = row.power_watt;
            const double p1 = row.power_watt * wcfg.pump_split;
            const double p2 = row.power_watt - p1;
            row.hot_detuning = find_hot_detuning(wcfg, rates, p1, p2);
            const PumpSteadyState steady = solve_steady_state(
                wcfg, rates, row.hot_detuning[0], row.hot_detuning[1], p1, p2);
            const DetuningParams params =
                detuning_params(wcfg, row.hot_detuning[0], row.hot_detuning[1]);
            const DriftMatrix mtx = build_drift_matrix(steady, params, rates,
                                                       wcfg.lambda_coeff, wcfg.toggles);
            row.spectrum =
                squeezing_spectrum_robust(mtx, rates, wcfg, Mode::s, {}, grid, nullptr);
            row.s_min0 = row.spectrum.s_min[zi];
            row.s_max0 = row.spectrum.s_max[zi];
        } catch (const PhysicsError& err) {
            row.ok = false;
            row.error = err.what();
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------

std::string ablation_label(const ProcessToggles& t)
{
    std::string label;
    if (t.dp_sfwm && t.sp_sfwm && t.bs_fwm && t.hp_sfwm) {
        label = "all";
    } else if (t.dp_sfwm && t.sp_sfwm && t.bs_fwm) {
        label = "no_hp";
    } else {
        for (auto [on, name] : {std::pair{t.dp_sfwm, "dp"}, {t.sp_sfwm, "sp"},
                                {t.bs_fwm, "bs"}, {t.hp_sfwm, "hp"}}) {
            if (!on) continue;
            if (!label.empty()) label += '_';
            label += name;
        }
        if (label.empty()) label = "none";
    }
    if (!t.spm) label += "_no_spm";
    if (!t.xpm) label += "_no_xpm";
    return label;
}

std::vector<ProcessToggles> standard_ablation_combos()
{
    ProcessToggles dp{};
    dp.sp_sfwm = dp.bs_fwm = dp.hp_sfwm = false;
    ProcessToggles dp_sp = dp;
    dp_sp.sp_sfwm = true;
    ProcessToggles dp_bs = dp;
    dp_bs.bs_fwm = true;
    ProcessToggles no_hp{};
    no_hp.hp_sfwm = false;
    ProcessToggles all{};
    return {dp, dp_sp, dp_bs, no_hp, all};
}

std::vector<AblationRow> ablate_processes(const SystemConfig& cfg,
                                          const std::vector<ProcessToggles>& combos,
                                          const std::vector<double>& omegas)
{
    for (size_t i = 0; i < combos.size(); ++i) {
        if (!combos[i].dp_sfwm)
            throw ConfigError("ablation combo " + std::to_string(i) +
                              " disables the degenerate squeezing process; the "
                              "study compares pathways feeding it");
        if (!combos[i].spm || !combos[i].xpm)
            throw ConfigError("ablation combo " + std::to_string(i) +
                              " disables SPM/XPM, which would move the classical "
                              "operating point instead of ablating a fluctuation "
                              "pathway");
    }
    check_finite_omegas(omegas);
    const ModeRates rates = derive_rates(cfg);
    // SPM/XPM are on in every combo, so the classical steady state is shared.
    const PumpSteadyState steady = pump_steady_state(cfg, rates);
    const DetuningParams params =
        detuning_params(cfg, steady.delta_abs[0], steady.delta_abs[1]);
    const std::vector<double> grid = grid_with_zero(omegas);
    const size_t zi = zero_index(grid);

    std::vector<AblationRow> rows(combos.size());
    for (size_t i = 0; i < combos.size(); ++i) {
        AblationRow& row = rows[i];
        row.toggles = combos[i];
        row.label = ablation_label(combos[i]);
        const DriftMatrix mtx =
            build_drift_matrix(steady, params, rates, cfg.lambda_coeff, combos[i]);
        row.spectrum =
            squeezing_spectrum_robust(mtx, rates, cfg, Mode::s, {}, grid, nullptr);
        row.s_min0 = row.spectrum.s_min[zi];
        row.s_max0 = row.spectrum.s_max[zi];
    }
    return rows;
}

// ---------------------------------------------------------------------------

DetuningMap map_detuning(const SystemConfig& cfg, const AxisSpec& delta1_axis,
                         const AxisSpec& delta2_axis, int threads)
{
    DetuningMap map;
    map.delta1 = axis_grid(delta1_axis);
    map.delta2 = axis_grid(delta2_axis);
    const size_t n1 = map.delta1.size(), n2 = map.delta2.size();
    map.s_min0.assign(n1, std::vector<double>(n2, kNaN));
    map.s_max0.assign(n1, std::vector<double>(n2, kNaN));
    const ModeRates rates = derive_rates(cfg);

    std::vector<std::string> notes(n1 * n2);
    parallel_for(n1 * n2, threads, [&](size_t k) {
        const size_t i1 = k / n2, i2 = k % n2;
        try {
            const PointEval ev =
                evaluate_offsets(cfg, rates, map.delta1[i1], map.delta2[i2],
                                 cfg.pump_total_power, cfg.toggles, false);
            map.s_min0[i1][i2] = ev.s_min0;
            map.s_max0[i1][i2] = ev.s_max0;
        } catch (const PhysicsError& err) {
            notes[k] = "map point (" + std::to_string(i1) + ", " + std::to_string(i2) +
                       ") at offsets (" + mhz(map.delta1[i1]) + ", " +
                       mhz(map.delta2[i2]) + "): " + err.what();
        }
    });

    bool any_valid = false;
    for (size_t i1 = 0; i1 < n1; ++i1)
        for (size_t i2 = 0; i2 < n2; ++i2) {
            const double v = map.s_min0[i1][i2];
            if (std::isnan(v)) {
                ++map.failures;
                map.warnings.push_back(notes[i1 * n2 + i2]);
                continue;
            }
            if (!any_valid || v < map.best_s_min0) {
                any_valid = true;
                map.best_s_min0 = v;
                map.best_delta1 = map.delta1[i1];
                map.best_delta2 = map.delta2[i2];
            }
        }
    if (!any_valid) map.best_s_min0 = kNaN;
    return map;
}

// ---------------------------------------------------------------------------

namespace {

const char* constraint_name(ConstraintKind kind)
{
    switch (kind) {
        case ConstraintKind::fixed_energy_product: return "energy product";
        case ConstraintKind::fixed_total_energy: return "total energy";
        case ConstraintKind::fixed_antisqueezing: return "anti-squeezing";
        case ConstraintKind::none: break;
    }
    return "none";
}

} // namespace

std::vector<SymmetricSweepRow> sweep_symmetric(const SystemConfig& cfg,
                                               const AxisSpec& delta_axis,
                                               const Constraint& constraint,
                                               int threads)
{
    if (constraint.kind == ConstraintKind::none)
        throw ConfigError("symmetric sweep requires a constraint");
    if (!(constraint.value > 0.0) || !std::isfinite(constraint.value))
        throw ConfigError("constraint value must be positive and finite");
    const std::vector<double> deltas = axis_grid(delta_axis);
    const ModeRates rates = derive_rates(cfg);
    const double target = constraint.kind == ConstraintKind::fixed_antisqueezing
                              ? std::pow(10.0, constraint.value / 10.0) // dB -> linear
                              : constraint.value;

    std::vector<SymmetricSweepRow> rows(deltas.size());
    parallel_for(rows.size(), threads, [&](size_t i) {
        SymmetricSweepRow& row = rows[i];
        row.delta = deltas[i];

        // Monotone-increasing measure of the constrained quantity vs power.
        // Energy constraints never need the fluctuation solve.
        const auto measure = [&](double power) -> double {
            if (constraint.kind == ConstraintKind::fixed_antisqueezing)
                return evaluate_offsets(cfg, rates, row.delta, -row.delta, power,
                                        cfg.toggles, false)
                    .s_max0;
            SystemConfig wcfg = cfg;
            wcfg.detuning_mode = DetuningMode::hot_offset;
            wcfg.detunings = {row.delta, -row.delta};
            wcfg.pump_total_power = power;
            const PumpSteadyState st = pump_steady_state(wcfg, rates);
            return constraint.kind == ConstraintKind::fixed_energy_product
                       ? st.energies[0] * st.energies[1]
                       : st.energies[0] + st.energies[1];
        };

        try {
            // Bracket the target: expand the power ceiling by doubling; when
            // the physics gives out first, bisect the feasibility boundary
            // and keep a 5% margin below it.
            double lo = 0.0;
            double hi = cfg.pump_total_power > 0.0 ? cfg.pump_total_power : 1e-3;
            bool bracketed = false;
            for (int step = 0; step < 60 && !bracketed; ++step) {
                double value = kNaN;
                try {
                    value = measure(hi);
                } catch (const PhysicsError&) {
                    double good = lo, bad = hi;
                    for (int b = 0; b < 60; ++b) {
                        const double mid = 0.5 * (good + bad);
                        try {
                            measure(mid);
                            good = mid;
                        } catch (const PhysicsError&) {
                            bad = mid;
                        }
                    }
                    hi = 0.95 * good;
                    if (measure(hi) < target)
                        throw PhysicsError(
                            std::string(constraint_name(constraint.kind)) +
                            " target unreachable below the feasibility ceiling " +
                            std::to_string(watt_to_dbm(hi)) + " dBm");
                    bracketed = true;
                    break;
                }
                if (value >= target)
                    bracketed = true;
                else {
                    lo = hi;
                    hi *= 2.0;
                }
            }
            if (!bracketed)
                throw PhysicsError(std::string(constraint_name(constraint.kind)) +
                                   " target not reached within the power search range");

            // Bisect on power until the quantity sits within 0.1% of target.
            double achieved = measure(hi);
            double power = hi;
            for (int it = 0; it < 200 && std::abs(achieved - target) > 1e-3 * target;
                 ++it) {
                const double mid = 0.5 * (lo + hi);
                const double value = measure(mid);
                if (value < target)
                    lo = mid;
                else
                    hi = mid;
                achieved = value;
                power = mid;
            }

            const PointEval ev = evaluate_offsets(cfg, rates, row.delta, -row.delta,
                                                  power, cfg.toggles, true);
            row.power_watt = power;
            row.power_dbm = watt_to_dbm(power);
            row.constraint_value = constraint.kind == ConstraintKind::fixed_antisqueezing
                                       ? 10.0 * std::log10(achieved)
                                       : achieved;
            row.residual = std::abs(achieved - target) / target;
            row.s_min0 = ev.s_min0;
            row.s_max0 = ev.s_max0;
            row.photon_ratio = ev.ratio;
        } catch (const PhysicsError& err) {
            row.ok = false;
            row.error = err.what();
        }
    });
    return rows;
}

// ---------------------------------------------------------------------------

namespace {

// Derivative-free simplex minimization in the detuning plane (standard
// reflection / expansion / contraction / shrink steps). Stops when the
// simplex shrinks below `xtol` in every coordinate or the value spread falls
// below `ftol`.
struct Simplex2D {
    std::array<std::array<double, 2>, 3> x{};
    std::array<double, 3> f{};
};

void nelder_mead(const std::function<double(double, double)>& fn,
                 Simplex2D& s, double xtol, double ftol, int max_iter)
{
    const auto order = [&s] {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(),
                  [&s](int a, int b) { return s.f[a] < s.f[b]; });
        Simplex2D t;
        for (int k = 0; k < 3; ++k) {
            t.x[k] = s.x[idx[k]];
            t.f[k] = s.f[idx[k]];
        }
        s = t;
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        double width0 = 0.0, width1 = 0.0;
        for (int k = 1; k < 3; ++k) {
            width0 = std::max(width0, std::abs(s.x[k][0] - s.x[0][0]));
            width1 = std::max(width1, std::abs(s.x[k][1] - s.x[0][1]));
        }
        if ((width0 < xtol && width1 < xtol) || s.f[2] - s.f[0] < ftol) break;

        const double c0 = 0.5 * (s.x[0][0] + s.x[1][0]);
        const double c1 = 0.5 * (s.x[0][1] + s.x[1][1]);
        const double r0 = c0 + (c0 - s.x[2][0]), r1 = c1 + (c1 - s.x[2][1]);
        const double fr = fn(r0, r1);
        if (fr < s.f[0]) {
            const double e0 = c0 + 2.0 * (c0 - s.x[2][0]);
            const double e1 = c1 + 2.0 * (c1 - s.x[2][1]);
            const double fe = fn(e0, e1);
            if (fe < fr) {
                s.x[2] = {e0, e1};
                s.f[2] = fe;
            } else {
                s.x[2] = {r0, r1};
                s.f[2] = fr;
            }
        } else if (fr < s.f[1]) {
            s.x[2] = {r0, r1};
            s.f[2] = fr;
        } else {
            const bool outside = fr < s.f[2];
            const double base0 = outside ? r0 : s.x[2][0];
            const double base1 = outside ? r1 : s.x[2][1];
            const double k0 = c0 + 0.5 * (base0 - c0), k1 = c1 + 0.5 * (base1 - c1);
            const double fk = fn(k0, k1);
            if (fk < std::min(fr, s.f[2])) {
                s.x[2] = {k0, k1};
                s.f[2] = fk;
            } else {
                for (int k = 1; k < 3; ++k) {
                    s.x[k] = {0.5 * (s.x[k][0] + s.x[0][0]),
                              0.5 * (s.x[k][1] + s.x[0][1])};
                    s.f[k] = fn(s.x[k][0], s.x[k][1]);
                }
            }
        }
        order();
    }
}

} // namespace

std::vector<BestSqueezingRow> best_squeezing(const SystemConfig& cfg,
                                             const std::vector<double>& powers_dbm,
                                             const std::vector<ProcessToggles>& toggle_sets,
                                             const AxisSpec& delta1_axis,
                                             const AxisSpec& delta2_axis,
                                             int threads)
{
    const std::vector<double> g1 = axis_grid(delta1_axis);
    const std::vector<double> g2 = axis_grid(delta2_axis);
    const ModeRates rates = derive_rates(cfg);
    constexpr double kFailed = 2.0; // above shot noise: never optimal

    std::vector<BestSqueezingRow> rows;
    rows.reserve(powers_dbm.size() * toggle_sets.size());
    for (double power_dbm : powers_dbm) {
        const double power = dbm_to_watt(power_dbm);
        for (const ProcessToggles& toggles : toggle_sets) {
            BestSqueezingRow row;
            row.power_dbm = power_dbm;
            row.toggles = toggles;
            row.label = ablation_label(toggles);

            int failures = 0;
            const auto value = [&](double d1, double d2) -> double {
                try {
                    return evaluate_offsets(cfg, rates, d1, d2, power, toggles, false)
                        .s_min0;
                } catch (const PhysicsError&) {
                    ++failures;
                    return kFailed;
                }
            };

            // Coarse scan (parallel, gathered by index) for the polish seed.
            const size_t n1 = g1.size(), n2 = g2.size();
            std::vector<double> coarse(n1 * n2);
            parallel_for(n1 * n2, threads, [&](size_t k) {
                try {
                    coarse[k] = evaluate_offsets(cfg, rates, g1[k / n2], g2[k % n2],
                                                 power, toggles, false)
                                    .s_min0;
                } catch (const PhysicsError&) {
                    coarse[k] = kFailed;
                }
            });
            size_t best = 0;
            for (size_t k = 1; k < n1 * n2; ++k)
                if (coarse[k] < coarse[best]) best = k;
            for (double v : coarse)
                if (v == kFailed) ++failures;

            if (coarse[best] >= kFailed) {
                row.ok = false;
                row.error = "every grid point was unstable or infeasible";
                row.failures = failures;
                rows.push_back(row);
                continue;
            }

            const double h1 = n1 > 1 ? g1[1] - g1[0] : constants::two_pi * 1e6;
            const double h2 = n2 > 1 ? g2[1] - g2[0] : constants::two_pi * 1e6;
            Simplex2D simplex;
            simplex.x[0] = {g1[best / n2], g2[best % n2]};
            simplex.x[1] = {simplex.x[0][0] + h1, simplex.x[0][1]};
            simplex.x[2] = {simplex.x[0][0], simplex.x[0][1] + h2};
            simplex.f[0] = coarse[best];
            simplex.f[1] = value(simplex.x[1][0], simplex.x[1][1]);
            simplex.f[2] = value(simplex.x[2][0], simplex.x[2][1]);
            nelder_mead(value, simplex, constants::two_pi * 1e4, 1e-12, 2000);

            row.delta1 = simplex.x[0][0];
            row.delta2 = simplex.x[0][1];
            const PointEval ev = evaluate_offsets(cfg, rates, row.delta1, row.delta2,
                                                  power, toggles, false);
            row.s_min0 = ev.s_min0;
            row.s_max0 = ev.s_max0;
            row.failures = failures;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace rsq
