// Acceptance gate: the end-to-end operating figures this simulator must
// reproduce, one [PASS]/[FAIL] line per criterion, tolerances pinned in the
// code. A red line means the computed model and the recorded target number
// genuinely disagree — do not loosen a tolerance to turn it green. The exit
// code is the number of failed criteria.
//
// Usage: rsq_acceptance [--cli <path-to-rsq-binary>]
// (criterion 1 shells out to the CLI when given; otherwise it uses the
// library's own report text).
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rsq/config.hpp"
#include "rsq/constants.hpp"
#include "rsq/csvio.hpp"
#include "rsq/drift.hpp"
#include "rsq/eigensystem.hpp"
#include "rsq/errors.hpp"
#include "rsq/modearea.hpp"
#include "rsq/oracle.hpp"
#include "rsq/pump.hpp"
#include "rsq/rates.hpp"
#include "rsq/spectrum.hpp"
#include "rsq/sweeps.hpp"

using namespace rsq;

namespace {

constexpr double tau = constants::two_pi;

double db(double s) { return 10.0 * std::log10(s); }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* format, ...)
{
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

ProcessToggles dp_only()
{
    ProcessToggles t;
    t.sp_sfwm = t.bs_fwm = t.hp_sfwm = false;
    return t;
}

ProcessToggles dp_sp()
{
    ProcessToggles t;
    t.bs_fwm = t.hp_sfwm = false;
    return t;
}

// Full linearization pipeline at the configured operating point.
DriftMatrix drift_at(const SystemConfig& cfg, const ModeRates& rates)
{
    const PumpSteadyState steady = pump_steady_state(cfg, rates);
    const DetuningParams params =
        detuning_params(cfg, steady.delta_abs[0], steady.delta_abs[1]);
    return build_drift_matrix(steady, params, rates, cfg.lambda_coeff, cfg.toggles);
}

// --- criterion 1 -----------------------------------------------------------

std::string capture_cli_validate(const std::string& cli)
{
    const std::string cmdline = cli + " validate 2>/dev/null";
    FILE* pipe = popen(cmdline.c_str(), "r");
    if (!pipe) return {};
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    pclose(pipe);
    return out;
}

bool criterion_linewidth(const std::string& cli, std::string* detail)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::string report =
        cli.empty() ? rates_report(default_config()) : capture_cli_validate(cli);
    const char* key = "2 * gamma_bar_s = ";
    const size_t pos = report.find(key);
    if (pos == std::string::npos) {
        *detail = "validate output does not contain the linewidth line";
        return false;
    }
    const double ghz = std::strtod(report.c_str() + pos + std::strlen(key), nullptr);
    const double elapsed = seconds_since(t0);
    const double rel = std::fabs(ghz - 0.97) / 0.97;
    *detail = fmt("validate reports 2*gamma_bar_s = %.6f GHz, target 0.97 +- 1%% "
                  "(off by %.2f%%), %.2f s%s",
                  ghz, rel * 100.0, elapsed,
                  cli.empty() ? " [library report]" : "");
    return rel <= 0.01 && elapsed < 1.0;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion_hot_detunings(std::string* detail)
{
    const SystemConfig cfg = default_config();
    const ModeRates rates = derive_rates(cfg);
    const double targets_mhz[3] = {-49.3, -76.3, -122.5};
    const double powers_dbm[3] = {11.0, 13.0, 15.0};
    bool pass = true;
    std::string parts;
    for (int i = 0; i < 3; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const double power = dbm_to_watt(powers_dbm[i]);
        const auto hot = find_hot_detuning(cfg, rates, 0.5 * power, 0.5 * power);
        const double elapsed = seconds_since(t0);
        double worst = 0.0;
        for (double h : hot)
            worst = std::max(worst, std::fabs(h / tau / 1e6 - targets_mhz[i]) /
                                        std::fabs(targets_mhz[i]));
        const bool ok = worst <= 0.02 && elapsed < 1.0;
        pass = pass && ok;
        parts += fmt("%s%g dBm -> (%.2f, %.2f) MHz vs %.1f (off %.2f%%)",
                     i ? "; " : "", powers_dbm[i], hot[0] / tau / 1e6,
                     hot[1] / tau / 1e6, targets_mhz[i], worst * 100.0);
    }
    *detail = parts + " [tolerance 2%]";
    return pass;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion_energies(std::string* detail)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig cfg = default_config(); // 15 dBm on hot resonance
    const PumpSteadyState steady = pump_steady_state(cfg, derive_rates(cfg));
    const double product_pj2 = steady.energies[0] * steady.energies[1] * 1e24;
    const double total_pj = (steady.energies[0] + steady.energies[1]) * 1e12;
    const double rel_p = std::fabs(product_pj2 - 69.6) / 69.6;
    const double rel_t = std::fabs(total_pj - 16.7) / 16.7;
    const double elapsed = seconds_since(t0);
    *detail = fmt("E1*E2 = %.4f pJ^2 vs 69.6 (off %.2f%%), E1+E2 = %.4f pJ vs "
                  "16.7 (off %.2f%%), %.2f s [tolerance 2%%]",
                  product_pj2, rel_p * 100.0, total_pj, rel_t * 100.0, elapsed);
    return rel_p <= 0.02 && rel_t <= 0.02 && elapsed < 1.0;
}

// --- criterion 4 -----------------------------------------------------------

double hot_shift_residual(const SystemConfig& cfg)
{
    const PumpSteadyState steady = pump_steady_state(cfg, derive_rates(cfg));
    const double three_u = 3.0 * (-cfg.lambda_coeff * std::norm(steady.F_p1));
    double worst = 0.0;
    for (double delta : steady.delta_abs)
        worst = std::max(worst, std::fabs(delta - three_u) / std::fabs(three_u));
    return worst;
}

bool criterion_shift_identity(std::string* detail)
{
    // The identity Delta_hot = 3U (U = -Lambda*|F_p1|^2) is exact only when
    // both pumps hold the same photon number, i.e. equal decay rates. A
    // narrow-FSR ring keeps the two pump linewidths equal to ~1e-5 while the
    // reference ring's 0.2 THz FSR splits them by ~0.1%, so the reference
    // configuration realizes the identity only to ~3e-3 (reported as
    // context).
    SystemConfig sym = default_config();
    const double omega_s = sym.mode_frequencies[static_cast<int>(Mode::s)];
    sym.mode_frequencies = expand_frequencies(omega_s, tau * 1e9, 0.0);
    const double residual_sym = hot_shift_residual(sym);
    const double residual_ref = hot_shift_residual(default_config());
    *detail = fmt("equal-linewidth pumps: max |Delta_hot - 3U|/|3U| = %.2e "
                  "(target < 1e-4); reference ring (unequal pump linewidths): "
                  "%.2e [context]",
                  residual_sym, residual_ref);
    return residual_sym < 1e-4;
}

// --- criterion 5 -----------------------------------------------------------

bool criterion_ablation_ordering(std::string* detail)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig cfg = default_config();
    std::map<std::string, AblationRow> rows;
    for (auto& row : ablate_processes(cfg, standard_ablation_combos()))
        rows[row.label] = row;

    // "squeezing" compares as positive dB below shot noise: more squeezing
    // means smaller s_min. Anti-squeezing compares s_max directly.
    const bool dp_beats_bs = rows["dp"].s_min0 < rows["dp_bs"].s_min0;
    const bool dp_beats_sp = rows["dp"].s_min0 < rows["dp_sp"].s_min0;
    const bool sp_antisqueezes_more = rows["dp_sp"].s_max0 > rows["dp"].s_max0;
    const bool bs_antisqueezes_less = rows["dp_bs"].s_max0 < rows["dp"].s_max0;
    const bool hp_costs_squeezing = rows["all"].s_min0 > rows["no_hp"].s_min0;
    const double elapsed = seconds_since(t0);

    *detail = fmt("s_min dB: dp %.4f, dp_sp %.4f, dp_bs %.4f, no_hp %.4f, all "
                  "%.4f; s_max dB: dp %.4f, dp_sp %.4f, dp_bs %.4f; orderings "
                  "%d%d%d%d%d, %.2f s",
                  db(rows["dp"].s_min0), db(rows["dp_sp"].s_min0),
                  db(rows["dp_bs"].s_min0), db(rows["no_hp"].s_min0),
                  db(rows["all"].s_min0), db(rows["dp"].s_max0),
                  db(rows["dp_sp"].s_max0), db(rows["dp_bs"].s_max0),
                  dp_beats_bs, dp_beats_sp, sp_antisqueezes_more,
                  bs_antisqueezes_less, hp_costs_squeezing, elapsed);
    return dp_beats_bs && dp_beats_sp && sp_antisqueezes_more &&
           bs_antisqueezes_less && hp_costs_squeezing && elapsed < 5.0;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion_map_structure(std::string* detail)
{
    SystemConfig cfg = default_config();
    cfg.pump_total_power = dbm_to_watt(16.0);

    // Budget check: the full-resolution map itself.
    SystemConfig cfg_dp = cfg;
    cfg_dp.toggles = dp_only();
    const auto t0 = std::chrono::steady_clock::now();
    const AxisSpec axis61{-tau * 200e6, tau * 200e6, 61};
    const DetuningMap map = map_detuning(cfg_dp, axis61, axis61);
    const double map_seconds = seconds_since(t0);

    // Polished optima for the location clauses.
    const AxisSpec axis41{-tau * 200e6, tau * 200e6, 41};
    const auto rows = best_squeezing(cfg, {16.0}, {dp_only(), dp_sp()},
                                     axis41, axis41);
    const auto& dp = rows[0];
    const auto& dpsp = rows[1];

    const double dp_radius_mhz = std::hypot(dp.delta1, dp.delta2) / tau / 1e6;
    const bool dp_near_origin = dp_radius_mhz <= 25.0;
    const bool dp_negative = dp.delta1 < 0.0 && dp.delta2 < 0.0;
    const double dpsp_line_mhz =
        std::fabs(dpsp.delta1 + dpsp.delta2) / std::sqrt(2.0) / tau / 1e6;
    const double dpsp_radius_mhz = std::hypot(dpsp.delta1, dpsp.delta2) / tau / 1e6;
    const bool dpsp_on_antidiagonal = dpsp_line_mhz <= 10.0;
    const bool dpsp_far_from_origin = dpsp_radius_mhz > 50.0;

    *detail = fmt("dp optimum (%.2f, %.2f) MHz: %.2f MHz from origin (target "
                  "<= 25), negative %s; dp_sp optimum (%.2f, %.2f) MHz: %.2f "
                  "MHz off the delta1 = -delta2 line (target <= 10), %.2f MHz "
                  "from origin (target > 50); 61x61 map %.1f s (map argmin "
                  "%.2f dB at (%.2f, %.2f) MHz)",
                  dp.delta1 / tau / 1e6, dp.delta2 / tau / 1e6, dp_radius_mhz,
                  dp_negative ? "yes" : "NO", dpsp.delta1 / tau / 1e6,
                  dpsp.delta2 / tau / 1e6, dpsp_line_mhz, dpsp_radius_mhz,
                  map_seconds, db(map.best_s_min0), map.best_delta1 / tau / 1e6,
                  map.best_delta2 / tau / 1e6);
    return dp_near_origin && dp_negative && dpsp_on_antidiagonal &&
           dpsp_far_from_origin && map_seconds < 120.0 && dp.ok && dpsp.ok;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion_power_gap(std::string* detail)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SystemConfig cfg = default_config();
    const std::vector<double> powers{10.0, 12.0, 14.0, 16.0};
    const AxisSpec axis{-tau * 200e6, tau * 200e6, 21};
    const auto rows = best_squeezing(cfg, powers, {dp_only(), dp_sp()}, axis, axis);

    std::vector<double> gaps;
    bool all_ok = true;
    for (size_t p = 0; p < powers.size(); ++p) {
        const auto& dp = rows[2 * p];
        const auto& dpsp = rows[2 * p + 1];
        all_ok = all_ok && dp.ok && dpsp.ok;
        gaps.push_back(db(dpsp.s_min0) - db(dp.s_min0));
    }
    bool monotone = true;
    for (size_t i = 1; i < gaps.size(); ++i)
        monotone = monotone && gaps[i] > gaps[i - 1];
    const double elapsed = seconds_since(t0);

    *detail = fmt("best-squeezing gap dp_sp - dp = {%.4f, %.4f, %.4f, %.4f} dB "
                  "at {10, 12, 14, 16} dBm, strictly increasing: %s, %.1f s",
                  gaps[0], gaps[1], gaps[2], gaps[3], monotone ? "yes" : "NO",
                  elapsed);
    return all_ok && monotone && elapsed < 300.0;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion_symmetric_enhancement(std::string* detail)
{
    SystemConfig cfg = default_config();
    cfg.toggles = dp_sp();
    const Constraint constraint{ConstraintKind::fixed_energy_product, 69.6e-24};
    const AxisSpec axis{0.0, tau * 900e6, 10}; // step: 2*pi*100 MHz
    const auto rows = sweep_symmetric(cfg, axis, constraint);

    const auto& at0 = rows[0];
    const auto& at100 = rows[1];
    const auto& edge = rows[9];
    const bool all_ok = at0.ok && at100.ok && edge.ok;
    const bool deeper = at100.s_min0 < at0.s_min0;
    const bool purer = at100.photon_ratio < at0.photon_ratio;
    const bool edge_power = std::fabs(edge.power_dbm - 21.5) <= 1.0;

    *detail = fmt("fixed E1*E2 = 69.6 pJ^2: s_min %.4f -> %.4f dB at delta = "
                  "0 -> 100 MHz (deeper: %s), (n_m+n_n)/n_s %.4f -> %.4f "
                  "(lower: %s), power at 900 MHz = %.3f dBm vs 21.5 +- 1",
                  db(at0.s_min0), db(at100.s_min0), deeper ? "yes" : "NO",
                  at0.photon_ratio, at100.photon_ratio, purer ? "yes" : "NO",
                  edge.power_dbm);
    return all_ok && deeper && purer && edge_power;
}

// --- criterion 9 -----------------------------------------------------------

// Shot-noise output at zero drive or zero nonlinearity.
bool property_shot_noise(std::string* why, double* min_product)
{
    for (int variant = 0; variant < 2; ++variant) {
        SystemConfig cfg = default_config();
        if (variant == 0)
            cfg.pump_total_power = 0.0;
        else
            cfg.lambda_coeff = 0.0;
        const ModeRates rates = derive_rates(cfg);
        const DriftMatrix mtx = drift_at(cfg, rates);
        const double gs = rates.gamma_bar[static_cast<int>(Mode::s)];
        const SpectrumResult res = squeezing_spectrum(
            eigendecompose(mtx), rates, cfg, Mode::s, {}, {0.0, gs, 3.0 * gs});
        for (size_t i = 0; i < res.omega_grid.size(); ++i) {
            *min_product = std::min(*min_product, res.s_min[i] * res.s_max[i]);
            if (std::fabs(res.s_min[i] - 1.0) > 1e-9 ||
                std::fabs(res.s_max[i] - 1.0) > 1e-9) {
                *why = fmt("S != 1 at %s = 0 (|S-1| up to %.2e)",
                           variant == 0 ? "P" : "Lambda",
                           std::max(std::fabs(res.s_min[i] - 1.0),
                                    std::fabs(res.s_max[i] - 1.0)));
                return false;
            }
        }
    }
    return true;
}

// Minimum-uncertainty output of the lossless dual-pump squeezer.
bool property_lossless(std::string* why, double* min_product)
{
    SystemConfig cfg = default_config();
    cfg.toggles = dp_only();
    cfg.intrinsic_q = {1e18, 1e18, 1e18, 1e18, 1e18};
    const ModeRates rates = derive_rates(cfg);
    const DriftMatrix mtx = drift_at(cfg, rates);
    const double gs = rates.gamma_bar[static_cast<int>(Mode::s)];
    const SpectrumResult res = squeezing_spectrum(
        eigendecompose(mtx), rates, cfg, Mode::s, {}, {0.0, gs, 3.0 * gs});
    for (size_t i = 0; i < res.omega_grid.size(); ++i) {
        const double product = res.s_min[i] * res.s_max[i];
        *min_product = std::min(*min_product, product);
        if (std::fabs(product - 1.0) > 1e-6) {
            *why = fmt("lossless s_min*s_max = 1 %+.2e", product - 1.0);
            return false;
        }
    }
    return true;
}

// Closed-form spectrum against the time-domain oracle at random stable
// operating points.
bool property_dual_route(std::string* why, double* min_product)
{
    std::mt19937 rng(20260816u);
    std::uniform_real_distribution<double> power_dbm(8.0, 15.0);
    std::uniform_real_distribution<double> offset(-tau * 150e6, tau * 150e6);
    const double theta = 0.3;
    int accepted = 0;
    double worst = 0.0;
    for (int attempt = 0; attempt < 400 && accepted < 20; ++attempt) {
        SystemConfig cfg = default_config();
        cfg.pump_total_power = dbm_to_watt(power_dbm(rng));
        cfg.detunings = {offset(rng), offset(rng)};
        ModeRates rates = derive_rates(cfg);
        const double gs = rates.gamma_bar[static_cast<int>(Mode::s)];
        DriftMatrix mtx;
        try {
            mtx = drift_at(cfg, rates);
        } catch (const PhysicsError&) {
            continue; // fold or unstable pump: resample
        }
        const StabilityReport report = stability(mtx);
        if (!report.stable || report.margin_gamma_s < 0.15) continue;
        EigenSystem eig;
        try {
            eig = eigendecompose(mtx);
        } catch (const IllConditionedError&) {
            continue; // near-defective basis: the documented fallback regime
        }
        ++accepted;
        const std::vector<double> omegas{0.0, gs};
        const SpectrumResult closed =
            squeezing_spectrum(eig, rates, cfg, Mode::s, {theta}, omegas);
        const SpectrumResult reference = time_domain_oracle(
            mtx, rates, Mode::s, settle_time(mtx), omegas, theta);
        for (size_t i = 0; i < omegas.size(); ++i) {
            *min_product =
                std::min(*min_product, closed.s_min[i] * closed.s_max[i]);
            worst = std::max(
                {worst,
                 std::fabs(closed.s_min[i] - reference.s_min[i]) / reference.s_min[i],
                 std::fabs(closed.s_max[i] - reference.s_max[i]) / reference.s_max[i],
                 std::fabs(closed.s_theta[i][0] - reference.s_theta[i][0]) /
                     reference.s_theta[i][0]});
        }
    }
    if (accepted < 20) {
        *why = fmt("only %d stable operating points accepted", accepted);
        return false;
    }
    if (worst > 1e-4) {
        *why = fmt("eigen-form vs oracle relative deviation %.2e > 1e-4", worst);
        return false;
    }
    return true;
}

// Conjugate-block structure and pump/sideband decoupling for every toggle
// combination.
bool property_drift_invariants(std::string* why)
{
    const std::array<double, 5> gamma_bar{3.0e9, 3.1e9, 3.2e9, 3.3e9, 3.4e9};
    const std::array<double, 5> R{1e8, -2e8, 3e8, -4e8, 5e8};
    const std::complex<double> F1{7.1e3, -2.3e3};
    const std::complex<double> F2{-5.7e3, 4.1e3};
    const int sidebands[3] = {0, 2, 4};
    const int pumps[2] = {1, 3};
    for (int bits = 0; bits < 64; ++bits) {
        ProcessToggles t;
        t.spm = bits & 1;
        t.xpm = bits & 2;
        t.dp_sfwm = bits & 4;
        t.sp_sfwm = bits & 8;
        t.bs_fwm = bits & 16;
        t.hp_sfwm = bits & 32;
        const Matrix10cd m = assemble_drift(gamma_bar, R, F1, F2, tau * 0.62, t);
        for (int j = 0; j < 5; ++j) {
            for (int k = 0; k < 5; ++k) {
                if (m(j + 5, k + 5) != std::conj(m(j, k)) ||
                    m(j + 5, k) != std::conj(m(j, k + 5))) {
                    *why = fmt("conjugate-block identity broken at (%d, %d), "
                               "combo %d", j, k, bits);
                    return false;
                }
            }
        }
        for (int j : sidebands) {
            for (int k : pumps) {
                if (m(j, k) != 0.0 || m(j, k + 5) != 0.0 || m(k, j) != 0.0 ||
                    m(k, j + 5) != 0.0) {
                    *why = fmt("sideband %d couples to pump %d in combo %d",
                               j, k, bits);
                    return false;
                }
            }
        }
    }
    return true;
}

// Effective area of an analytic Gaussian mode.
bool property_gaussian_area(std::string* why)
{
    const double w = 0.8e-6;
    const int n = 121;
    ModeProfile profile;
    profile.n_bar = 2.0;
    profile.chi3_bar = 1e-21;
    for (int i = 0; i < n; ++i)
        profile.y.push_back(-3e-6 + 6e-6 * i / (n - 1));
    for (int i = 0; i < n; ++i)
        profile.z.push_back(-3e-6 + 6e-6 * i / (n - 1));
    for (double y : profile.y) {
        for (double z : profile.z) {
            const double e = std::exp(-(y * y + z * z) / (w * w));
            profile.e.push_back({std::complex<double>(e, 0.0), 0.0, 0.0});
            profile.index.push_back(2.0);
            profile.chi3_mask.push_back(1.0);
        }
    }
    const double area = effective_area(profile, Polarization::te);
    const double target = constants::pi * w * w;
    const double rel = std::fabs(area - target) / target;
    if (rel > 0.005) {
        *why = fmt("Gaussian area off by %.2f%% (target pi*w^2)", rel * 100.0);
        return false;
    }
    return true;
}

// (s_min, s_max) cannot depend on the ring-channel coupling phase gauge.
bool property_gauge_invariance(std::string* why)
{
    const SystemConfig cfg = default_config();
    ModeRates rates = derive_rates(cfg);
    const DriftMatrix mtx = drift_at(cfg, rates);
    const EigenSystem eig = eigendecompose(mtx);
    const double gs = rates.gamma_bar[static_cast<int>(Mode::s)];
    const std::vector<double> omegas{0.0, gs};
    const SpectrumResult base =
        squeezing_spectrum(eig, rates, cfg, Mode::s, {}, omegas);
    rates.coupling_phase = {0.4, 1.3, 2.1, 0.7, 1.9};
    const SpectrumResult rotated =
        squeezing_spectrum(eig, rates, cfg, Mode::s, {}, omegas);
    for (size_t i = 0; i < omegas.size(); ++i) {
        if (std::fabs(rotated.s_min[i] - base.s_min[i]) > 1e-10 * base.s_min[i] ||
            std::fabs(rotated.s_max[i] - base.s_max[i]) > 1e-10 * base.s_max[i]) {
            *why = "squeezing extremes moved under a coupling-phase change";
            return false;
        }
    }
    return true;
}

bool criterion_property_suite(std::string* detail)
{
    double min_product = std::numeric_limits<double>::infinity();
    struct Property {
        const char* name;
        bool ok;
        std::string why;
    };
    std::vector<Property> checks;
    auto add = [&checks](const char* name, auto&& fn) {
        Property p{name, false, {}};
        try {
            p.ok = fn(&p.why);
        } catch (const std::exception& e) {
            p.why = e.what();
        }
        checks.push_back(std::move(p));
    };

    add("shot-noise limits", [&](std::string* why) {
        return property_shot_noise(why, &min_product);
    });
    add("lossless minimum uncertainty", [&](std::string* why) {
        return property_lossless(why, &min_product);
    });
    add("dual-route agreement", [&](std::string* why) {
        return property_dual_route(why, &min_product);
    });
    add("drift invariants (64 combos)",
        [](std::string* why) { return property_drift_invariants(why); });
    add("Gaussian effective area",
        [](std::string* why) { return property_gaussian_area(why); });
    add("coupling-phase gauge invariance",
        [](std::string* why) { return property_gauge_invariance(why); });
    add("uncertainty product", [&](std::string* why) {
        if (min_product >= 1.0 - 1e-9) return true;
        *why = fmt("s_min*s_max dipped to %.12f", min_product);
        return false;
    });

    std::string failures;
    int passed = 0;
    for (const auto& p : checks) {
        if (p.ok) {
            ++passed;
        } else {
            failures += fmt("%s%s (%s)", failures.empty() ? "" : "; ", p.name,
                            p.why.c_str());
        }
    }
    *detail = failures.empty()
                  ? fmt("%d/%zu properties hold", passed, checks.size())
                  : fmt("%d/%zu properties hold; failed: %s", passed,
                        checks.size(), failures.c_str());
    return failures.empty();
}

} // namespace

int main(int argc, char** argv)
{
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc) cli = argv[++i];
    }

    int failures = 0;
    auto report = [&failures](int id, const char* name, bool pass,
                              const std::string& detail) {
        std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, name,
                    detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    };
    auto run = [&report](int id, const char* name, auto&& fn) {
        std::string detail;
        bool pass = false;
        try {
            pass = fn(&detail);
        } catch (const std::exception& e) {
            detail = fmt("exception: %s", e.what());
        }
        report(id, name, pass, detail);
    };

    run(1, "linewidth",
        [&cli](std::string* d) { return criterion_linewidth(cli, d); });
    run(2, "hot detunings", criterion_hot_detunings);
    run(3, "pump energies", criterion_energies);
    run(4, "hot-shift identity", criterion_shift_identity);
    run(5, "process-ablation ordering", criterion_ablation_ordering);
    run(6, "detuning-map structure", criterion_map_structure);
    run(7, "power-gap monotonicity", criterion_power_gap);
    run(8, "symmetric-sweep enhancement", criterion_symmetric_enhancement);
    run(9, "property suite", criterion_property_suite);

    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
