#include "rsq/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <chrono>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "rsq/constants.hpp"
#include "rsq/errors.hpp"
#include "rsq/rates.hpp"

namespace rsq {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDbFloor = 1e-300; // keeps log10 finite-signed for s -> 0

double to_db(double s) { return 10.0 * std::log10(std::max(s, kDbFloor)); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// One cell, CSV spelling: numbers via %.17g ("nan"/"inf" for non-finite),
// booleans as 1/0, strings escaped.
std::string csv_cell(const json& v) {
    if (v.is_null()) return "nan";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_float()) return format_full(v.get<double>());
    if (v.is_number()) return v.dump();
    return csv_escape(v.get<std::string>());
}

// Column-oriented result table rendered to either format. `extras` are
// scalar summary values (comment lines in CSV, top-level members in JSON);
// `comments` are free-text notes.
struct Table {
    std::string kind;
    std::vector<std::string> comments;
    std::vector<std::pair<std::string, json>> extras;
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string render_table(const Table& t, const SystemConfig& cfg, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = config_comment_block(cfg);
        for (const auto& c : t.comments) out += "# " + c + "\n";
        for (const auto& [key, value] : t.extras)
            out += "# " + key + " = " + csv_cell(value) + "\n";
        for (size_t i = 0; i < t.columns.size(); ++i) {
            out += t.columns[i];
            out += (i + 1 < t.columns.size()) ? "," : "\n";
        }
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                out += csv_cell(row[i]);
                out += (i + 1 < row.size()) ? "," : "\n";
            }
        }
        return out;
    }
    json doc;
    doc["kind"] = t.kind;
    doc["config"] = serialize_config(cfg);
    if (!t.comments.empty()) doc["notes"] = t.comments;
    for (const auto& [key, value] : t.extras) doc[key] = value;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json rec;
        for (size_t i = 0; i < row.size(); ++i) rec[t.columns[i]] = row[i];
        rows.push_back(std::move(rec));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

json num(double v) { return json(v); }

// NaN (rendered nan/null) for values that a failed row never produced.
json num_if(bool ok, double v) {
    return ok ? json(v) : json(std::nan(""));
}

std::string theta_column(double theta) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "s_db_theta_%.6g", theta);
    return buf;
}

const char* constraint_label(ConstraintKind kind) {
    switch (kind) {
        case ConstraintKind::fixed_energy_product: return "fixed_energy_product";
        case ConstraintKind::fixed_total_energy: return "fixed_total_energy";
        case ConstraintKind::fixed_antisqueezing: return "fixed_antisqueezing";
        case ConstraintKind::none: break;
    }
    return "none";
}

const char* onoff(bool b) { return b ? "on" : "off"; }

} // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("output format must be 'csv' or 'json' (got '" + name + "')");
}

const char* format_extension(OutputFormat format) {
    return format == OutputFormat::csv ? "csv" : "json";
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string config_comment_block(const SystemConfig& cfg) {
    std::string out;
    std::string line;
    for (char c : serialize_config(cfg)) {
        if (c == '\n') {
            if (!line.empty()) out += (line[0] == '#' ? "#" : "# ") + line + "\n";
            line.clear();
        } else {
            line += c;
        }
    }
    return out;
}

std::string render_spectrum(const SpectrumResult& res, const SystemConfig& cfg,
                            OutputFormat format) {
    Table t;
    t.kind = "spectrum";
    t.extras.emplace_back("mode", mode_name(res.mode));
    t.columns = {"omega_hz", "s_min_db", "s_max_db", "theta_opt_rad"};
    for (double theta : res.thetas) t.columns.push_back(theta_column(theta));
    for (size_t i = 0; i < res.omega_grid.size(); ++i) {
        std::vector<json> row{num(res.omega_grid[i] / constants::two_pi),
                              num(to_db(res.s_min[i])), num(to_db(res.s_max[i])),
                              num(res.theta_opt[i])};
        for (size_t k = 0; k < res.thetas.size(); ++k)
            row.push_back(num(to_db(res.s_theta[i][k])));
        t.rows.push_back(std::move(row));
    }
    return render_table(t, cfg, format);
}

std::string render_photons(const PhotonNumbers& pn, const SystemConfig& cfg,
                           OutputFormat format) {
    Table t;
    t.kind = "photons";
    t.extras.emplace_back("ratio_outer_to_s", num(pn.ratio_outer_to_s));
    t.columns = {"mode", "n_photons"};
    for (int j = 0; j < kNumModes; ++j)
        t.rows.push_back({json(mode_name(static_cast<Mode>(j))), num(pn.n[j])});
    return render_table(t, cfg, format);
}

std::string render_key_values(const std::string& kind,
                              const std::vector<std::pair<std::string, double>>& rows,
                              const SystemConfig& cfg, OutputFormat format) {
    Table t;
    t.kind = kind;
    t.columns = {"key", "value"};
    for (const auto& [key, value] : rows) t.rows.push_back({json(key), num(value)});
    return render_table(t, cfg, format);
}

std::string render_steady_state(const PumpSteadyState& steady, const SystemConfig& cfg,
                                OutputFormat format) {
    std::vector<std::pair<std::string, double>> rows;
    auto put = [&rows](const char* key, double value) {
        rows.emplace_back(key, value);
    };
    put("f_p1_re", steady.F_p1.real());
    put("f_p1_im", steady.F_p1.imag());
    put("f_p2_re", steady.F_p2.real());
    put("f_p2_im", steady.F_p2.imag());
    put("photons_p1", std::norm(steady.F_p1));
    put("photons_p2", std::norm(steady.F_p2));
    put("delta_abs_p1_hz", steady.delta_abs[0] / constants::two_pi);
    put("delta_abs_p2_hz", steady.delta_abs[1] / constants::two_pi);
    put("delta_eff_p1_hz", steady.delta_eff[0] / constants::two_pi);
    put("delta_eff_p2_hz", steady.delta_eff[1] / constants::two_pi);
    put("spm_shift_p1_hz", steady.spm_shift[0] / constants::two_pi);
    put("spm_shift_p2_hz", steady.spm_shift[1] / constants::two_pi);
    put("spm_shift_u_hz", steady.spm_shift_U / constants::two_pi);
    put("energy_p1_j", steady.energies[0]);
    put("energy_p2_j", steady.energies[1]);
    put("energy_product_j2", steady.energies[0] * steady.energies[1]);
    put("energy_total_j", steady.energies[0] + steady.energies[1]);
    put("residual", steady.residual);
    put("stable", steady.stable ? 1.0 : 0.0);
    return render_key_values("steady_state", rows, cfg, format);
}

std::string render_power_sweep(const std::vector<PowerSweepRow>& rows,
                               const SystemConfig& cfg, OutputFormat format) {
    Table t;
    t.kind = "power_sweep";
    t.comments = {"squeezing columns are evaluated at omega = 0"};
    t.columns = {"power_dbm", "power_watt", "hot_detuning_p1_hz", "hot_detuning_p2_hz",
                 "s_min0", "s_max0", "s_min0_db", "s_max0_db", "ok", "error"};
    for (const auto& r : rows) {
        t.rows.push_back({num(r.power_dbm), num(r.power_watt),
                          num_if(r.ok, r.hot_detuning[0] / constants::two_pi),
                          num_if(r.ok, r.hot_detuning[1] / constants::two_pi),
                          num_if(r.ok, r.s_min0), num_if(r.ok, r.s_max0),
                          num_if(r.ok, to_db(r.s_min0)), num_if(r.ok, to_db(r.s_max0)),
                          json(r.ok), json(r.error)});
    }
    return render_table(t, cfg, format);
}

std::string render_ablation(const std::vector<AblationRow>& rows,
                            const SystemConfig& cfg, OutputFormat format) {
    Table t;
    t.kind = "ablation";
    t.comments = {"squeezing columns are evaluated at omega = 0"};
    t.columns = {"label", "spm", "xpm", "dp_sfwm", "sp_sfwm", "bs_fwm", "hp_sfwm",
                 "s_min0", "s_max0", "s_min0_db", "s_max0_db"};
    for (const auto& r : rows) {
        t.rows.push_back({json(r.label), json(r.toggles.spm), json(r.toggles.xpm),
                          json(r.toggles.dp_sfwm), json(r.toggles.sp_sfwm),
                          json(r.toggles.bs_fwm), json(r.toggles.hp_sfwm),
                          num(r.s_min0), num(r.s_max0), num(to_db(r.s_min0)),
                          num(to_db(r.s_max0))});
    }
    return render_table(t, cfg, format);
}

std::string render_detuning_map(const DetuningMap& map, const SystemConfig& cfg,
                                OutputFormat format) {
    Table t;
    t.kind = "detuning_map";
    t.comments = {"long format: one row per (delta1, delta2) grid point; "
                  "nan marks operating points without a stable steady state"};
    t.extras.emplace_back("failures", json(map.failures));
    t.extras.emplace_back("warning_count", json(map.warnings.size()));
    t.extras.emplace_back("best_delta1_hz", num(map.best_delta1 / constants::two_pi));
    t.extras.emplace_back("best_delta2_hz", num(map.best_delta2 / constants::two_pi));
    t.extras.emplace_back("best_s_min0", num(map.best_s_min0));
    t.extras.emplace_back("best_s_min0_db",
                          num(std::isnan(map.best_s_min0) ? std::nan("")
                                                          : to_db(map.best_s_min0)));
    t.columns = {"delta1_hz", "delta2_hz", "s_min0", "s_max0", "s_min0_db", "s_max0_db"};
    for (size_t i1 = 0; i1 < map.delta1.size(); ++i1) {
        for (size_t i2 = 0; i2 < map.delta2.size(); ++i2) {
            const double smin = map.s_min0[i1][i2];
            const double smax = map.s_max0[i1][i2];
            const bool ok = !std::isnan(smin);
            t.rows.push_back({num(map.delta1[i1] / constants::two_pi),
                              num(map.delta2[i2] / constants::two_pi), num(smin),
                              num(smax), num_if(ok, to_db(smin)), num_if(ok, to_db(smax))});
        }
    }
    return render_table(t, cfg, format);
}

std::string render_symmetric_sweep(const std::vector<SymmetricSweepRow>& rows,
                                   const Constraint& constraint, const SystemConfig& cfg,
                                   OutputFormat format) {
    Table t;
    t.kind = "symmetric_sweep";
    t.comments = {"pumps at hot offsets (+delta, -delta); squeezing columns are "
                  "evaluated at omega = 0"};
    t.extras.emplace_back("constraint", constraint_label(constraint.kind));
    t.extras.emplace_back("constraint_target", num(constraint.value));
    t.columns = {"delta_hz", "power_dbm", "power_watt", "constraint_value", "residual",
                 "s_min0", "s_max0", "s_min0_db", "s_max0_db", "photon_ratio",
                 "ok", "error"};
    for (const auto& r : rows) {
        t.rows.push_back({num(r.delta / constants::two_pi), num_if(r.ok, r.power_dbm),
                          num_if(r.ok, r.power_watt), num_if(r.ok, r.constraint_value),
                          num_if(r.ok, r.residual), num_if(r.ok, r.s_min0),
                          num_if(r.ok, r.s_max0), num_if(r.ok, to_db(r.s_min0)),
                          num_if(r.ok, to_db(r.s_max0)), num_if(r.ok, r.photon_ratio),
                          json(r.ok), json(r.error)});
    }
    return render_table(t, cfg, format);
}

std::string render_best_squeezing(const std::vector<BestSqueezingRow>& rows,
                                  const SystemConfig& cfg, OutputFormat format) {
    Table t;
    t.kind = "best_squeezing";
    t.comments = {"optimum of s_min(omega = 0) over the pump-detuning plane, "
                  "per power and process combination"};
    t.columns = {"power_dbm", "label", "delta1_hz", "delta2_hz", "s_min0", "s_max0",
                 "s_min0_db", "s_max0_db", "failures", "ok", "error"};
    for (const auto& r : rows) {
        t.rows.push_back({num(r.power_dbm), json(r.label),
                          num_if(r.ok, r.delta1 / constants::two_pi),
                          num_if(r.ok, r.delta2 / constants::two_pi),
                          num_if(r.ok, r.s_min0), num_if(r.ok, r.s_max0),
                          num_if(r.ok, to_db(r.s_min0)), num_if(r.ok, to_db(r.s_max0)),
                          json(r.failures), json(r.ok), json(r.error)});
    }
    return render_table(t, cfg, format);
}

std::string render_matrix(const DriftMatrix& mtx, const SystemConfig& cfg,
                          OutputFormat format) {
    Table t;
    t.kind = "drift_matrix";
    t.comments = {"rows/columns 0-4: fluctuation operators of [m, p1, s, p2, n]; "
                  "5-9: their conjugates in the same order",
                  "units: rad/s"};
    for (int k = 0; k < 10; ++k) {
        char re[16], im[16];
        std::snprintf(re, sizeof re, "re_%d", k);
        std::snprintf(im, sizeof im, "im_%d", k);
        t.columns.emplace_back(re);
        t.columns.emplace_back(im);
    }
    for (int j = 0; j < 10; ++j) {
        std::vector<json> row;
        for (int k = 0; k < 10; ++k) {
            row.push_back(num(mtx.m(j, k).real()));
            row.push_back(num(mtx.m(j, k).imag()));
        }
        t.rows.push_back(std::move(row));
    }
    return render_table(t, cfg, format);
}

std::string rates_report(const SystemConfig& cfg) {
    const ModeRates rates = derive_rates(cfg);
    std::string out = "derived rates (frequencies quoted as omega/2pi)\n\n";
    char buf[256];
    out += "mode      nu (THz)   gamma_bar (MHz)   kappa_channel (MHz)   "
           "kappa_phantom (MHz)   escape\n";
    for (int j = 0; j < kNumModes; ++j) {
        const Mode mode = static_cast<Mode>(j);
        std::snprintf(buf, sizeof buf,
                      "%-4s %13.6f %17.6f %21.6f %21.6f %8.4f\n",
                      mode_name(mode), cfg.mode_frequencies[j] / constants::two_pi / 1e12,
                      rates.gamma_bar[j] / constants::two_pi / 1e6,
                      rates.kappa_channel[j] / constants::two_pi / 1e6,
                      rates.kappa_phantom[j] / constants::two_pi / 1e6,
                      escape_efficiency(rates, mode));
        out += buf;
    }
    const int s = static_cast<int>(Mode::s);
    std::snprintf(buf, sizeof buf,
                  "\n2 * gamma_bar_s = %.9f GHz (s-mode linewidth, omega/2pi)\n",
                  2.0 * rates.gamma_bar[s] / constants::two_pi / 1e9);
    out += buf;
    std::snprintf(buf, sizeof buf, "lambda_coeff = %.9g Hz (omega/2pi)\n",
                  cfg.lambda_coeff / constants::two_pi);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "pump: total %.9g mW (%.4f dBm), split %.6g -> p1 %.9g mW, p2 %.9g mW\n",
                  cfg.pump_total_power * 1e3, watt_to_dbm(cfg.pump_total_power),
                  cfg.pump_split, cfg.pump_total_power * cfg.pump_split * 1e3,
                  cfg.pump_total_power * (1.0 - cfg.pump_split) * 1e3);
    out += buf;
    std::snprintf(buf, sizeof buf, "detuning mode: %s; values = %.9g MHz, %.9g MHz\n",
                  cfg.detuning_mode == DetuningMode::hot_offset ? "hot_offset"
                                                                : "absolute",
                  cfg.detunings[0] / constants::two_pi / 1e6,
                  cfg.detunings[1] / constants::two_pi / 1e6);
    out += buf;
    const ProcessToggles& tg = cfg.toggles;
    std::snprintf(buf, sizeof buf,
                  "processes: spm=%s xpm=%s dp_sfwm=%s sp_sfwm=%s bs_fwm=%s hp_sfwm=%s\n",
                  onoff(tg.spm), onoff(tg.xpm), onoff(tg.dp_sfwm), onoff(tg.sp_sfwm),
                  onoff(tg.bs_fwm), onoff(tg.hp_sfwm));
    out += buf;
    return out;
}

std::string render_manifest(const RunManifest& manifest) {
    json doc;
    doc["tool"] = "rsq";
    doc["version"] = kToolVersion;
    doc["subcommand"] = manifest.subcommand;
    doc["timestamp_utc"] = manifest.timestamp;
    doc["command"] = manifest.command;
    doc["outputs"] = manifest.outputs;
    doc["warning_count"] = manifest.warnings.size();
    doc["warnings"] = manifest.warnings;
    doc["config"] = serialize_config(manifest.config);
    return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace rsq
