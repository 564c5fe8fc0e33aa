// Command-line interface over the library. Every subcommand resolves the
// configuration (built-in reference ring unless --config is given), runs one
// study, writes the result table into --out in the requested --format, and
// drops a JSON run manifest next to it. Exit codes: 0 success, 2 bad
// configuration or flags, 3 physically invalid operating point, 4 I/O
// failure.
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

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

namespace fs = std::filesystem;
using namespace rsq;

namespace {

constexpr double tau = constants::two_pi;

double to_db(double s) { return 10.0 * std::log10(s); }

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    std::string format = "csv";
};

SystemConfig resolve_config(const GlobalOptions& g)
{
    SystemConfig cfg = g.config_path.empty() ? default_config()
                                             : load_config(g.config_path);
    validate_config(cfg);
    return cfg;
}

// Collects the files one subcommand writes and finishes with the manifest.
class Emitter {
public:
    Emitter(const GlobalOptions& g, const std::string& subcommand,
            std::string stem, std::vector<std::string> command,
            const SystemConfig& cfg)
        : dir_(g.out_dir), stem_(std::move(stem)), format_(parse_format(g.format))
    {
        manifest_.subcommand = subcommand;
        manifest_.command = std::move(command);
        manifest_.config = cfg;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (!fs::is_directory(dir_))
            throw IoError("cannot create output directory '" + dir_.string() +
                          "': " + ec.message());
    }

    OutputFormat format() const { return format_; }

    void warn(const std::string& message)
    {
        manifest_.warnings.push_back(message);
        std::fprintf(stderr, "warning: %s\n", message.c_str());
    }

    void warn_all(const std::vector<std::string>& messages)
    {
        for (const auto& m : messages) warn(m);
    }

    void emit(const std::string& content)
    {
        const fs::path path = dir_ / (stem_ + "." + format_extension(format_));
        write_text_file(path.string(), content);
        manifest_.outputs.push_back(path.string());
    }

    void finish()
    {
        manifest_.timestamp = utc_timestamp();
        const fs::path path = dir_ / (stem_ + "_manifest.json");
        write_text_file(path.string(), render_manifest(manifest_));
        for (const auto& f : manifest_.outputs)
            std::printf("wrote %s\n", f.c_str());
        std::printf("wrote %s (%zu warning(s))\n", path.string().c_str(),
                    manifest_.warnings.size());
    }

private:
    fs::path dir_;
    std::string stem_;
    OutputFormat format_;
    RunManifest manifest_;
};

struct OperatingPoint {
    ModeRates rates;
    PumpSteadyState steady;
    DetuningParams params;
    DriftMatrix mtx;
};

OperatingPoint operating_point(const SystemConfig& cfg)
{
    OperatingPoint op;
    op.rates = derive_rates(cfg);
    op.steady = pump_steady_state(cfg, op.rates);
    op.params = detuning_params(cfg, op.steady.delta_abs[0], op.steady.delta_abs[1]);
    op.mtx = build_drift_matrix(op.steady, op.params, op.rates, cfg.lambda_coeff,
                                cfg.toggles);
    return op;
}

// Toggle set named by an ablation label: "all", "no_hp", or an
// underscore-joined subset of {dp, sp, bs, hp} (SPM/XPM always stay on).
ProcessToggles parse_ablation_label(const std::string& label)
{
    ProcessToggles t;
    if (label == "all") return t;
    if (label == "no_hp") {
        t.hp_sfwm = false;
        return t;
    }
    t.dp_sfwm = t.sp_sfwm = t.bs_fwm = t.hp_sfwm = false;
    std::string token;
    auto apply = [&](const std::string& tok) {
        if (tok == "dp") t.dp_sfwm = true;
        else if (tok == "sp") t.sp_sfwm = true;
        else if (tok == "bs") t.bs_fwm = true;
        else if (tok == "hp") t.hp_sfwm = true;
        else
            throw ConfigError("unknown process token '" + tok + "' in combo '" +
                              label + "' (expected dp, sp, bs, hp, no_hp, or all)");
    };
    for (char c : label) {
        if (c == '_') {
            apply(token);
            token.clear();
        } else {
            token += c;
        }
    }
    apply(token);
    return t;
}

ConstraintKind parse_constraint_kind(const std::string& name)
{
    if (name == "product") return ConstraintKind::fixed_energy_product;
    if (name == "total") return ConstraintKind::fixed_total_energy;
    if (name == "antisqueezing") return ConstraintKind::fixed_antisqueezing;
    throw ConfigError("constraint must be 'product', 'total', or 'antisqueezing' "
                      "(got '" + name + "')");
}

Polarization parse_polarization(const std::string& name)
{
    if (name == "te") return Polarization::te;
    if (name == "tm") return Polarization::tm;
    if (name == "full") return Polarization::full_vector;
    throw ConfigError("--polarization must be 'te', 'tm', or 'full' (got '" +
                      name + "')");
}

int run_validate(const SystemConfig& cfg)
{
    std::fputs(rates_report(cfg).c_str(), stdout);
    std::printf("\nconfiguration OK\n");
    return 0;
}

int run_steady_state(const GlobalOptions& g, const std::vector<std::string>& cmd,
                     const SystemConfig& cfg)
{
    const ModeRates rates = derive_rates(cfg);
    const PumpSteadyState steady = pump_steady_state(cfg, rates);
    Emitter em(g, "steady-state", "steady_state", cmd, cfg);
    if (!steady.stable)
        em.warn("classical pump steady state is linearly unstable at this "
                "operating point");
    em.emit(render_steady_state(steady, cfg, em.format()));
    em.finish();
    std::printf("pump photons: p1 %.6g, p2 %.6g\n", std::norm(steady.F_p1),
                std::norm(steady.F_p2));
    std::printf("pump energies: %.6g pJ + %.6g pJ (product %.6g pJ^2)\n",
                steady.energies[0] * 1e12, steady.energies[1] * 1e12,
                steady.energies[0] * steady.energies[1] * 1e24);
    return 0;
}

struct SpectrumOptions {
    std::string mode = "s";
    double omega_max_hz = -1.0; // sentinel: 4 * gamma_bar_s / 2pi
    int omega_points = 161;
    std::vector<double> thetas;
};

int run_spectrum(const GlobalOptions& g, const SpectrumOptions& o,
                 const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    const Mode mode = parse_mode(o.mode);
    if (o.omega_points < 1) throw ConfigError("--omega-points must be >= 1");
    const OperatingPoint op = operating_point(cfg);
    const double omega_max = o.omega_max_hz >= 0.0
                                 ? tau * o.omega_max_hz
                                 : 4.0 * op.rates.gamma_bar[static_cast<int>(Mode::s)];
    if (omega_max <= 0.0 && o.omega_points > 1)
        throw ConfigError("--omega-max-hz must be positive for more than one point");
    const std::vector<double> omegas =
        axis_grid({0.0, omega_max, o.omega_points});

    Emitter em(g, "spectrum", "spectrum", cmd, cfg);
    std::vector<std::string> warnings;
    const SpectrumResult res = squeezing_spectrum_robust(op.mtx, op.rates, cfg, mode,
                                                         o.thetas, omegas, &warnings);
    em.warn_all(warnings);
    em.emit(render_spectrum(res, cfg, em.format()));
    em.finish();
    std::printf("mode %s at Omega = 0: s_min = %.4f dB, s_max = %.4f dB, "
                "theta_opt = %.6f rad\n",
                mode_name(mode), to_db(res.s_min[0]), to_db(res.s_max[0]),
                res.theta_opt[0]);
    if (res.s_min[0] < 1.0)
        std::printf("squeezing: %.4f dB below shot noise\n", -to_db(res.s_min[0]));
    return 0;
}

int run_photons(const GlobalOptions& g, const std::vector<std::string>& cmd,
                const SystemConfig& cfg)
{
    const OperatingPoint op = operating_point(cfg);
    Emitter em(g, "photons", "photons", cmd, cfg);
    PhotonNumbers pn;
    try {
        pn = photon_numbers(eigendecompose(op.mtx), op.rates);
    } catch (const IllConditionedError& e) {
        em.warn(std::string("eigenbasis too close to defective, integrating the "
                            "time-domain correlators instead: ") + e.what());
        const double T = settle_time(op.mtx);
        for (int j = 0; j < kNumModes; ++j)
            pn.n[j] = oracle_photon_number(op.mtx, static_cast<Mode>(j), T);
        const double ns = pn.n[static_cast<int>(Mode::s)];
        pn.ratio_outer_to_s = (pn.n[0] + pn.n[4]) / ns;
    }
    em.emit(render_photons(pn, cfg, em.format()));
    em.finish();
    for (int j = 0; j < kNumModes; ++j)
        std::printf("n_%s = %.8g\n", mode_name(static_cast<Mode>(j)), pn.n[j]);
    std::printf("(n_m + n_n)/n_s = %.8g\n", pn.ratio_outer_to_s);
    return 0;
}

struct PowerSweepOptions {
    double min_dbm = 5.0;
    double max_dbm = 16.0;
    int points = 12;
    std::vector<double> powers_dbm; // explicit list overrides the axis
};

int run_sweep_power(const GlobalOptions& g, const PowerSweepOptions& o,
                    const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    const std::vector<double> powers =
        o.powers_dbm.empty() ? axis_grid({o.min_dbm, o.max_dbm, o.points})
                             : o.powers_dbm;
    Emitter em(g, "sweep-power", "power_sweep", cmd, cfg);
    const auto rows = sweep_power(cfg, powers, {}, g.threads);
    for (const auto& row : rows)
        if (!row.ok)
            em.warn("power " + format_full(row.power_dbm) + " dBm: " + row.error);
    em.emit(render_power_sweep(rows, cfg, em.format()));
    em.finish();
    for (const auto& row : rows)
        if (row.ok)
            std::printf("%8.3f dBm: s_min(0) = %.4f dB, s_max(0) = %.4f dB\n",
                        row.power_dbm, to_db(row.s_min0), to_db(row.s_max0));
    return 0;
}

int run_ablate(const GlobalOptions& g, const std::vector<std::string>& combo_labels,
               const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    std::vector<ProcessToggles> combos;
    if (combo_labels.empty()) {
        combos = standard_ablation_combos();
    } else {
        for (const auto& label : combo_labels)
            combos.push_back(parse_ablation_label(label));
    }
    Emitter em(g, "ablate", "ablation", cmd, cfg);
    const auto rows = ablate_processes(cfg, combos);
    em.emit(render_ablation(rows, cfg, em.format()));
    em.finish();
    for (const auto& row : rows)
        std::printf("%-12s s_min(0) = %.4f dB, s_max(0) = %.4f dB\n",
                    row.label.c_str(), to_db(row.s_min0), to_db(row.s_max0));
    return 0;
}

struct MapOptions {
    double delta1_min_mhz = -200.0, delta1_max_mhz = 200.0;
    double delta2_min_mhz = -200.0, delta2_max_mhz = 200.0;
    int points = 61;
};

int run_map_detuning(const GlobalOptions& g, const MapOptions& o,
                     const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    Emitter em(g, "map-detuning", "detuning_map", cmd, cfg);
    const AxisSpec axis1{tau * 1e6 * o.delta1_min_mhz, tau * 1e6 * o.delta1_max_mhz,
                         o.points};
    const AxisSpec axis2{tau * 1e6 * o.delta2_min_mhz, tau * 1e6 * o.delta2_max_mhz,
                         o.points};
    const DetuningMap map = map_detuning(cfg, axis1, axis2, g.threads);
    em.warn_all(map.warnings);
    em.emit(render_detuning_map(map, cfg, em.format()));
    em.finish();
    if (std::isnan(map.best_s_min0)) {
        std::printf("no stable operating point on the grid (%d gap(s))\n",
                    map.failures);
    } else {
        std::printf("best s_min(0) = %.4f dB at offsets (%.4f, %.4f) MHz "
                    "(%d gap(s))\n",
                    to_db(map.best_s_min0), map.best_delta1 / tau / 1e6,
                    map.best_delta2 / tau / 1e6, map.failures);
    }
    return 0;
}

struct SymmetricOptions {
    double delta_max_mhz = 900.0;
    int points = 10;
    std::string constraint;
    double value = 0.0;
};

int run_sweep_symmetric(const GlobalOptions& g, const SymmetricOptions& o,
                        const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    const Constraint constraint{parse_constraint_kind(o.constraint), o.value};
    Emitter em(g, "sweep-symmetric", "symmetric_sweep", cmd, cfg);
    const AxisSpec axis{0.0, tau * 1e6 * o.delta_max_mhz, o.points};
    const auto rows = sweep_symmetric(cfg, axis, constraint, g.threads);
    for (const auto& row : rows)
        if (!row.ok)
            em.warn("offset " + format_full(row.delta / tau / 1e6) + " MHz: " +
                    row.error);
    em.emit(render_symmetric_sweep(rows, constraint, cfg, em.format()));
    em.finish();
    for (const auto& row : rows)
        if (row.ok)
            std::printf("delta %9.3f MHz: %8.4f dBm, s_min(0) = %.4f dB, "
                        "(n_m+n_n)/n_s = %.4f\n",
                        row.delta / tau / 1e6, row.power_dbm, to_db(row.s_min0),
                        row.photon_ratio);
    return 0;
}

struct BestOptions {
    std::vector<double> powers_dbm{10.0, 12.0, 14.0, 16.0};
    std::vector<std::string> combos{"dp", "dp_sp"};
    double delta_range_mhz = 200.0;
    int grid_points = 41;
};

int run_best_squeezing(const GlobalOptions& g, const BestOptions& o,
                       const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    std::vector<ProcessToggles> sets;
    for (const auto& label : o.combos) sets.push_back(parse_ablation_label(label));
    const AxisSpec axis{-tau * 1e6 * o.delta_range_mhz, tau * 1e6 * o.delta_range_mhz,
                        o.grid_points};
    Emitter em(g, "best-squeezing", "best_squeezing", cmd, cfg);
    const auto rows = best_squeezing(cfg, o.powers_dbm, sets, axis, axis, g.threads);
    for (const auto& row : rows)
        if (!row.ok)
            em.warn(row.label + " at " + format_full(row.power_dbm) + " dBm: " +
                    row.error);
    em.emit(render_best_squeezing(rows, cfg, em.format()));
    em.finish();
    for (const auto& row : rows)
        if (row.ok)
            std::printf("%8.3f dBm %-8s best s_min(0) = %.4f dB at "
                        "(%.4f, %.4f) MHz\n",
                        row.power_dbm, row.label.c_str(), to_db(row.s_min0),
                        row.delta1 / tau / 1e6, row.delta2 / tau / 1e6);
    return 0;
}

struct LambdaOptions {
    std::string mode_file;
    double n_bar = 0.0;
    double chi3_bar = 0.0;
    double v_ring = 0.0; // 0: take the configured ring group velocity
    std::string polarization = "full";
};

int run_lambda(const GlobalOptions& g, const LambdaOptions& o,
               const std::vector<std::string>& cmd, const SystemConfig& cfg)
{
    const Polarization pol = parse_polarization(o.polarization);
    const double v_ring = o.v_ring > 0.0 ? o.v_ring : cfg.group_velocity_ring;
    const double omega_s = cfg.mode_frequencies[static_cast<int>(Mode::s)];
    const ModeProfile profile =
        load_mode_profile(o.mode_file, o.n_bar, o.chi3_bar, v_ring);
    const double area = effective_area(profile, pol);
    const double n2 = nonlinear_index(o.n_bar, o.chi3_bar);
    const double gamma_wg = waveguide_gamma(area, omega_s, o.n_bar, o.chi3_bar);
    const double lambda = lambda_coefficient(gamma_wg, omega_s, v_ring,
                                             cfg.ring_circumference);

    Emitter em(g, "lambda", "lambda_estimate", cmd, cfg);
    em.emit(render_key_values("lambda_estimate",
                              {{"effective_area_m2", area},
                               {"n2_m2_per_w", n2},
                               {"gamma_wg_per_w_m", gamma_wg},
                               {"lambda_rad_s", lambda},
                               {"lambda_hz", lambda / tau}},
                              cfg, em.format()));
    em.finish();
    std::printf("effective area  = %.6g um^2\n", area * 1e12);
    std::printf("n2              = %.6g m^2/W\n", n2);
    std::printf("waveguide gamma = %.6g /(W m)\n", gamma_wg);
    std::printf("Lambda          = 2pi x %.6g Hz\n", lambda / tau);
    std::printf("config line: lambda.coeff_hz = %.9g\n", lambda / tau);
    return 0;
}

int run_dump_matrix(const GlobalOptions& g, const std::vector<std::string>& cmd,
                    const SystemConfig& cfg)
{
    const OperatingPoint op = operating_point(cfg);
    Emitter em(g, "dump-matrix", "drift_matrix", cmd, cfg);
    const StabilityReport report = stability(op.mtx);
    if (!report.stable)
        em.warn("drift matrix is not strictly stable at this operating point "
                "(spectral abscissa " + format_full(report.spectral_abscissa) +
                " rad/s)");
    em.emit(render_matrix(op.mtx, cfg, em.format()));
    em.finish();
    std::printf("spectral abscissa = %.6g rad/s (stability margin %.4f "
                "gamma_bar_s); %s\n",
                report.spectral_abscissa, report.margin_gamma_s,
                report.stable ? "stable" : "UNSTABLE");
    return 0;
}

int run(int argc, char** argv)
{
    CLI::App app{"degenerate-squeezing simulator for a dual-pumped Kerr "
                 "microring (five-mode linearized model)"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path,
                   "key=value config file (default: built-in reference ring)");
    app.add_option("--out", g.out_dir, "output directory, created if missing")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads for sweeps (0 = all)")
        ->capture_default_str();
    app.add_option("--format", g.format, "table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* validate_cmd =
        app.add_subcommand("validate", "check the configuration and report "
                                       "derived rates");

    auto* steady_cmd = app.add_subcommand(
        "steady-state", "classical pump amplitudes, detunings, and energies");

    SpectrumOptions spec_opts;
    auto* spectrum_cmd = app.add_subcommand(
        "spectrum", "output squeezing spectrum S(Omega, theta) for one mode");
    spectrum_cmd->add_option("--mode", spec_opts.mode, "m, p1, s, p2, or n")
        ->capture_default_str();
    spectrum_cmd->add_option("--omega-max-hz", spec_opts.omega_max_hz,
                             "sideband grid end, Hz (default 4*gamma_bar_s/2pi)");
    spectrum_cmd->add_option("--omega-points", spec_opts.omega_points,
                             "sideband grid size")
        ->capture_default_str();
    spectrum_cmd->add_option("--theta", spec_opts.thetas,
                             "extra local-oscillator angle column(s), rad");

    auto* photons_cmd = app.add_subcommand(
        "photons", "steady-state intracavity photon numbers per mode");

    PowerSweepOptions power_opts;
    auto* sweep_power_cmd = app.add_subcommand(
        "sweep-power", "squeezing at Omega = 0 vs total pump power, pumps held "
                       "on the hot resonances");
    sweep_power_cmd->add_option("--min-dbm", power_opts.min_dbm, "axis start")
        ->capture_default_str();
    sweep_power_cmd->add_option("--max-dbm", power_opts.max_dbm, "axis end")
        ->capture_default_str();
    sweep_power_cmd->add_option("--points", power_opts.points, "axis size")
        ->capture_default_str();
    sweep_power_cmd->add_option("--powers-dbm", power_opts.powers_dbm,
                                "explicit power list overriding the axis");

    std::vector<std::string> ablate_combos;
    auto* ablate_cmd = app.add_subcommand(
        "ablate", "squeezing with selected parametric processes disabled");
    ablate_cmd->add_option("--combo", ablate_combos,
                           "combo label(s): all, no_hp, or joined subsets of "
                           "dp/sp/bs/hp (default: dp dp_sp dp_bs no_hp all)");

    MapOptions map_opts;
    auto* map_cmd = app.add_subcommand(
        "map-detuning", "s_min(Omega = 0) over a grid of pump-detuning offsets "
                        "from the hot resonances");
    map_cmd->add_option("--delta1-min-mhz", map_opts.delta1_min_mhz, "axis 1 start")
        ->capture_default_str();
    map_cmd->add_option("--delta1-max-mhz", map_opts.delta1_max_mhz, "axis 1 end")
        ->capture_default_str();
    map_cmd->add_option("--delta2-min-mhz", map_opts.delta2_min_mhz, "axis 2 start")
        ->capture_default_str();
    map_cmd->add_option("--delta2-max-mhz", map_opts.delta2_max_mhz, "axis 2 end")
        ->capture_default_str();
    map_cmd->add_option("--points", map_opts.points, "grid size per axis")
        ->capture_default_str();

    SymmetricOptions sym_opts;
    auto* sym_cmd = app.add_subcommand(
        "sweep-symmetric", "pumps at (+delta, -delta) hot offsets with the power "
                           "adjusted to hold a constraint");
    sym_cmd->add_option("--delta-max-mhz", sym_opts.delta_max_mhz, "axis end")
        ->capture_default_str();
    sym_cmd->add_option("--delta-points", sym_opts.points, "axis size")
        ->capture_default_str();
    sym_cmd->add_option("--constraint", sym_opts.constraint,
                        "product (J^2), total (J), or antisqueezing (linear "
                        "s_max at Omega = 0)")
        ->required();
    sym_cmd->add_option("--value", sym_opts.value, "constraint target")->required();

    BestOptions best_opts;
    auto* best_cmd = app.add_subcommand(
        "best-squeezing", "optimize s_min(Omega = 0) over the detuning plane per "
                          "power and process combo");
    best_cmd->add_option("--powers-dbm", best_opts.powers_dbm, "total power list")
        ->capture_default_str();
    best_cmd->add_option("--combo", best_opts.combos, "combo label(s)")
        ->capture_default_str();
    best_cmd->add_option("--delta-range-mhz", best_opts.delta_range_mhz,
                         "half-width of the square search domain")
        ->capture_default_str();
    best_cmd->add_option("--grid-points", best_opts.grid_points,
                         "coarse grid size per axis")
        ->capture_default_str();

    LambdaOptions lambda_opts;
    auto* lambda_cmd = app.add_subcommand(
        "lambda", "estimate the per-photon coupling rate from a mode-profile "
                  "file");
    lambda_cmd->add_option("--mode-file", lambda_opts.mode_file,
                           "gridded cross-section profile")
        ->required();
    lambda_cmd->add_option("--n-bar", lambda_opts.n_bar, "core refractive index")
        ->required();
    lambda_cmd->add_option("--chi3-bar", lambda_opts.chi3_bar,
                           "core chi3, m^2/V^2")
        ->required();
    lambda_cmd->add_option("--v-ring", lambda_opts.v_ring,
                           "ring group velocity, m/s (default: configured value)");
    lambda_cmd->add_option("--polarization", lambda_opts.polarization,
                           "te, tm, or full")
        ->capture_default_str();

    auto* dump_cmd = app.add_subcommand(
        "dump-matrix", "drift matrix at the configured operating point");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::vector<std::string> cmd(argv, argv + argc);
    try {
        const SystemConfig cfg = resolve_config(g);
        if (app.got_subcommand(validate_cmd)) return run_validate(cfg);
        if (app.got_subcommand(steady_cmd)) return run_steady_state(g, cmd, cfg);
        if (app.got_subcommand(spectrum_cmd))
            return run_spectrum(g, spec_opts, cmd, cfg);
        if (app.got_subcommand(photons_cmd)) return run_photons(g, cmd, cfg);
        if (app.got_subcommand(sweep_power_cmd))
            return run_sweep_power(g, power_opts, cmd, cfg);
        if (app.got_subcommand(ablate_cmd))
            return run_ablate(g, ablate_combos, cmd, cfg);
        if (app.got_subcommand(map_cmd)) return run_map_detuning(g, map_opts, cmd, cfg);
        if (app.got_subcommand(sym_cmd))
            return run_sweep_symmetric(g, sym_opts, cmd, cfg);
        if (app.got_subcommand(best_cmd))
            return run_best_squeezing(g, best_opts, cmd, cfg);
        if (app.got_subcommand(lambda_cmd)) return run_lambda(g, lambda_opts, cmd, cfg);
        if (app.got_subcommand(dump_cmd)) return run_dump_matrix(g, cmd, cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const PhysicsError& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
