#include "rsq/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "rsq/constants.hpp"

namespace rsq {

namespace {

using constants::c0;
using constants::two_pi;

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Raw right-hand sides keyed by dotted name, plus helpers that convert and
// consume them so leftovers can be reported as unknown keys.
class KeyBag {
public:
    explicit KeyBag(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            // strip comment (a '#' outside quotes)
            bool quoted = false;
            for (size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') quoted = !quoted;
                else if (line[i] == '#' && !quoted) { line.erase(i); break; }
            }
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
            if (!entries_.emplace(key, val).second)
                throw ConfigError("duplicate config key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<double> take_number(const std::string& key) {
        auto raw = take(key);
        if (!raw) return std::nullopt;
        return parse_number(key, *raw);
    }

    std::optional<bool> take_bool(const std::string& key) {
        auto raw = take(key);
        if (!raw) return std::nullopt;
        if (*raw == "true") return true;
        if (*raw == "false") return false;
        throw ConfigError("config key '" + key + "': expected true or false, got '" + *raw + "'");
    }

    std::optional<std::string> take_string(const std::string& key) {
        auto raw = take(key);
        if (!raw) return std::nullopt;
        std::string v = *raw;
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
            v = v.substr(1, v.size() - 2);
        return v;
    }

    // Accepts either one number (broadcast) or a bracketed 5-list.
    std::optional<std::array<double, 5>> take_per_mode(const std::string& key) {
        auto raw = take(key);
        if (!raw) return std::nullopt;
        std::array<double, 5> out{};
        if (raw->front() == '[') {
            auto vals = parse_list(key, *raw);
            if (vals.size() != 5)
                throw ConfigError("config key '" + key + "': expected 5 entries, got " +
                                  std::to_string(vals.size()));
            for (int i = 0; i < 5; ++i) out[i] = vals[i];
        } else {
            out.fill(parse_number(key, *raw));
        }
        return out;
    }

    void finish() const {
        if (!entries_.empty())
            throw ConfigError("unknown config key '" + entries_.begin()->first + "'");
    }

private:
    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        std::string v = it->second;
        entries_.erase(it);
        return v;
    }

    static double parse_number(const std::string& key, const std::string& raw) {
        char* end = nullptr;
        double v = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0' || !std::isfinite(v))
            throw ConfigError("config key '" + key + "': expected a finite number, got '" + raw + "'");
        return v;
    }

    static std::vector<double> parse_list(const std::string& key, const std::string& raw) {
        if (raw.front() != '[' || raw.back() != ']')
            throw ConfigError("config key '" + key + "': malformed list '" + raw + "'");
        std::vector<double> out;
        std::string body = raw.substr(1, raw.size() - 2);
        size_t pos = 0;
        while (pos <= body.size()) {
            size_t comma = body.find(',', pos);
            std::string item = trim(comma == std::string::npos ? body.substr(pos)
                                                               : body.substr(pos, comma - pos));
            if (item.empty())
                throw ConfigError("config key '" + key + "': empty list entry");
            out.push_back(parse_number(key, item));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    }

    std::map<std::string, std::string> entries_;
};

bool all_equal(const std::array<double, 5>& a) {
    for (int i = 1; i < 5; ++i)
        if (a[i] != a[0]) return false;
    return true;
}

std::string per_mode_str(const std::array<double, 5>& a, double scale) {
    if (all_equal(a)) return fmt(a[0] * scale);
    std::string s = "[";
    for (int i = 0; i < 5; ++i) {
        if (i) s += ", ";
        s += fmt(a[i] * scale);
    }
    return s + "]";
}

} // namespace

const char* mode_name(Mode mode) {
    static constexpr const char* names[5] = {"m", "p1", "s", "p2", "n"};
    return names[static_cast<int>(mode)];
}

Mode parse_mode(const std::string& name) {
    for (int i = 0; i < kNumModes; ++i)
        if (name == mode_name(static_cast<Mode>(i))) return static_cast<Mode>(i);
    throw ConfigError("unknown mode '" + name + "' (expected one of m, p1, s, p2, n)");
}

std::array<double, 5> expand_frequencies(double omega_s, double fsr, double d2) {
    std::array<double, 5> out{};
    for (int j = -2; j <= 2; ++j)
        out[j + 2] = omega_s + fsr * j + 0.5 * d2 * j * j;
    return out;
}

SystemConfig default_config() {
    SystemConfig cfg;
    cfg.ring_radius = 113e-6;
    cfg.ring_circumference = two_pi * cfg.ring_radius;
    cfg.mode_frequencies = expand_frequencies(two_pi * c0 / 1551.9e-9,
                                              two_pi * 0.2e12, two_pi * 3e6);
    cfg.loaded_q.fill(2e5);
    cfg.intrinsic_q.fill(1e6);
    cfg.lambda_coeff = two_pi * 0.62;
    cfg.group_velocity_ring = c0 / 2.05;
    cfg.group_velocity_channel.fill(c0 / 2.05);
    cfg.pump_total_power = 1e-3 * std::pow(10.0, 15.0 / 10.0); // 15 dBm
    cfg.pump_split = 0.5;
    cfg.detuning_mode = DetuningMode::hot_offset;
    cfg.detunings = {0.0, 0.0};
    cfg.toggles = ProcessToggles{};
    return cfg;
}

void validate_config(const SystemConfig& cfg) {
    if (!(cfg.ring_radius > 0))
        throw ConfigError("ring.radius_um: must be positive");
    if (!(cfg.ring_circumference > 0))
        throw ConfigError("ring circumference: must be positive");
    for (int i = 0; i < 5; ++i) {
        const char* name = mode_name(static_cast<Mode>(i));
        if (!(cfg.mode_frequencies[i] > 0))
            throw ConfigError(std::string("mode frequency for '") + name + "': must be positive");
        if (!(cfg.loaded_q[i] > 0))
            throw ConfigError(std::string("q.loaded for '") + name + "': must be positive");
        if (!(cfg.intrinsic_q[i] > 0))
            throw ConfigError(std::string("q.intrinsic for '") + name + "': must be positive");
        if (cfg.loaded_q[i] > cfg.intrinsic_q[i])
            throw ConfigError(std::string("q.loaded for '") + name +
                              "': must not exceed q.intrinsic (channel coupling would be negative)");
        if (!(cfg.group_velocity_channel[i] > 0) || cfg.group_velocity_channel[i] > c0)
            throw ConfigError(std::string("velocity.channel_over_c for '") + name +
                              "': must lie in (0, 1]");
    }
    for (int i = 1; i < 5; ++i)
        if (!(cfg.mode_frequencies[i] > cfg.mode_frequencies[i - 1]))
            throw ConfigError("mode frequencies: must be strictly increasing in order m < p1 < s < p2 < n");
    if (cfg.lambda_coeff < 0)
        throw ConfigError("lambda.coeff_hz: must be non-negative");
    if (!(cfg.group_velocity_ring > 0) || cfg.group_velocity_ring > c0)
        throw ConfigError("velocity.ring_over_c: must lie in (0, 1]");
    if (cfg.pump_total_power < 0 || !std::isfinite(cfg.pump_total_power))
        throw ConfigError("pump power: must be non-negative and finite");
    if (cfg.pump_split < 0 || cfg.pump_split > 1)
        throw ConfigError("pump.split: must lie in [0, 1]");
}

SystemConfig parse_config(const std::string& text) {
    KeyBag bag(text);
    SystemConfig cfg = default_config();

    if (auto v = bag.take_number("ring.radius_um")) {
        cfg.ring_radius = *v * 1e-6;
        cfg.ring_circumference = two_pi * cfg.ring_radius;
    }
    if (auto v = bag.take_per_mode("q.loaded")) cfg.loaded_q = *v;
    if (auto v = bag.take_per_mode("q.intrinsic")) cfg.intrinsic_q = *v;
    if (auto v = bag.take_number("lambda.coeff_hz")) cfg.lambda_coeff = *v * two_pi;
    if (auto v = bag.take_number("velocity.ring_over_c")) cfg.group_velocity_ring = *v * c0;
    if (auto v = bag.take_per_mode("velocity.channel_over_c")) {
        for (int i = 0; i < 5; ++i) cfg.group_velocity_channel[i] = (*v)[i] * c0;
    } else {
        // channel velocity defaults to the ring value when not given explicitly
        cfg.group_velocity_channel.fill(cfg.group_velocity_ring);
    }

    // Mode frequencies: explicit 5-list, or (s reference, FSR, dispersion offset).
    const bool has_list = bag.has("modes.frequencies_thz");
    const bool has_triple = bag.has("modes.s_wavelength_nm") || bag.has("modes.s_frequency_thz") ||
                            bag.has("modes.fsr_thz") || bag.has("modes.d2_mhz");
    if (has_list && has_triple)
        throw ConfigError("modes.frequencies_thz cannot be combined with the "
                          "modes.s_*/fsr/d2 keys");
    if (has_list) {
        auto v = bag.take_per_mode("modes.frequencies_thz");
        for (int i = 0; i < 5; ++i) cfg.mode_frequencies[i] = (*v)[i] * 1e12 * two_pi;
    } else {
        if (bag.has("modes.s_wavelength_nm") && bag.has("modes.s_frequency_thz"))
            throw ConfigError("give only one of modes.s_wavelength_nm and modes.s_frequency_thz");
        double omega_s = two_pi * c0 / 1551.9e-9;
        if (auto v = bag.take_number("modes.s_wavelength_nm")) {
            if (*v <= 0) throw ConfigError("modes.s_wavelength_nm: must be positive");
            omega_s = two_pi * c0 / (*v * 1e-9);
        }
        if (auto v = bag.take_number("modes.s_frequency_thz")) omega_s = *v * 1e12 * two_pi;
        double fsr = two_pi * 0.2e12;
        double d2 = two_pi * 3e6;
        if (auto v = bag.take_number("modes.fsr_thz")) {
            if (*v <= 0) throw ConfigError("modes.fsr_thz: must be positive");
            fsr = *v * 1e12 * two_pi;
        }
        if (auto v = bag.take_number("modes.d2_mhz")) d2 = *v * 1e6 * two_pi;
        cfg.mode_frequencies = expand_frequencies(omega_s, fsr, d2);
    }

    if (bag.has("pump.total_power_dbm") && bag.has("pump.total_power_mw"))
        throw ConfigError("give only one of pump.total_power_dbm and pump.total_power_mw");
    if (auto v = bag.take_number("pump.total_power_dbm"))
        cfg.pump_total_power = 1e-3 * std::pow(10.0, *v / 10.0);
    if (auto v = bag.take_number("pump.total_power_mw")) {
        if (*v < 0) throw ConfigError("pump.total_power_mw: must be non-negative");
        cfg.pump_total_power = *v * 1e-3;
    }
    if (auto v = bag.take_number("pump.split")) cfg.pump_split = *v;

    if (auto v = bag.take_string("detuning.mode")) {
        if (*v == "absolute") cfg.detuning_mode = DetuningMode::absolute_detuning;
        else if (*v == "hot_offset") cfg.detuning_mode = DetuningMode::hot_offset;
        else throw ConfigError("detuning.mode: expected \"absolute\" or \"hot_offset\", got '" + *v + "'");
    }
    if (auto v = bag.take_number("detuning.p1_mhz")) cfg.detunings[0] = *v * 1e6 * two_pi;
    if (auto v = bag.take_number("detuning.p2_mhz")) cfg.detunings[1] = *v * 1e6 * two_pi;

    if (auto v = bag.take_bool("processes.spm")) cfg.toggles.spm = *v;
    if (auto v = bag.take_bool("processes.xpm")) cfg.toggles.xpm = *v;
    if (auto v = bag.take_bool("processes.dp_sfwm")) cfg.toggles.dp_sfwm = *v;
    if (auto v = bag.take_bool("processes.sp_sfwm")) cfg.toggles.sp_sfwm = *v;
    if (auto v = bag.take_bool("processes.bs_fwm")) cfg.toggles.bs_fwm = *v;
    if (auto v = bag.take_bool("processes.hp_sfwm")) cfg.toggles.hp_sfwm = *v;

    bag.finish();
    validate_config(cfg);
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const SystemConfig& cfg) {
    std::ostringstream out;
    out << "# resonator\n";
    out << "ring.radius_um = " << fmt(cfg.ring_radius * 1e6) << "\n";
    out << "q.loaded = " << per_mode_str(cfg.loaded_q, 1.0) << "\n";
    out << "q.intrinsic = " << per_mode_str(cfg.intrinsic_q, 1.0) << "\n";
    out << "lambda.coeff_hz = " << fmt(cfg.lambda_coeff / two_pi) << "\n";
    out << "velocity.ring_over_c = " << fmt(cfg.group_velocity_ring / c0) << "\n";
    out << "velocity.channel_over_c = " << per_mode_str(cfg.group_velocity_channel, 1.0 / c0) << "\n";
    out << "modes.frequencies_thz = [";
    for (int i = 0; i < 5; ++i) {
        if (i) out << ", ";
        out << fmt(cfg.mode_frequencies[i] / (two_pi * 1e12));
    }
    out << "]\n";
    out << "# drive\n";
    out << "pump.total_power_mw = " << fmt(cfg.pump_total_power * 1e3) << "\n";
    out << "pump.split = " << fmt(cfg.pump_split) << "\n";
    out << "detuning.mode = \""
        << (cfg.detuning_mode == DetuningMode::hot_offset ? "hot_offset" : "absolute") << "\"\n";
    out << "detuning.p1_mhz = " << fmt(cfg.detunings[0] / (two_pi * 1e6)) << "\n";
    out << "detuning.p2_mhz = " << fmt(cfg.detunings[1] / (two_pi * 1e6)) << "\n";
    out << "# processes\n";
    out << "processes.spm = " << (cfg.toggles.spm ? "true" : "false") << "\n";
    out << "processes.xpm = " << (cfg.toggles.xpm ? "true" : "false") << "\n";
    out << "processes.dp_sfwm = " << (cfg.toggles.dp_sfwm ? "true" : "false") << "\n";
    out << "processes.sp_sfwm = " << (cfg.toggles.sp_sfwm ? "true" : "false") << "\n";
    out << "processes.bs_fwm = " << (cfg.toggles.bs_fwm ? "true" : "false") << "\n";
    out << "processes.hp_sfwm = " << (cfg.toggles.hp_sfwm ? "true" : "false") << "\n";
    return out.str();
}

void save_config(const SystemConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write config file '" + path + "'");
    out << serialize_config(cfg);
    if (!out) throw IoError("failed writing config file '" + path + "'");
}

} // namespace rsq
