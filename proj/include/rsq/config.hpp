// System configuration: physical parameters, pump drive, process toggles.
// Config files are UTF-8 text with flat dotted keys (`ring.radius_um = 113`);
// see docs/config.md for the full key list. All quantities are stored
// internally in SI units with angular frequencies (rad/s).
#pragma once

#include <array>
#include <string>

#include "rsq/errors.hpp"

namespace rsq {

inline constexpr int kNumModes = 5;

// Resonance labels in frequency order; index J+5 refers to the conjugate
// (daggered) fluctuation row of mode J throughout the library.
enum class Mode : int { m = 0, p1 = 1, s = 2, p2 = 3, n = 4 };

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& name); // throws ConfigError on bad name

// Independent switches for the nonlinear processes entering both the
// classical pump equations (spm, xpm) and the fluctuation drift matrix.
struct ProcessToggles {
    bool spm = true;     // self-phase modulation
    bool xpm = true;     // cross-phase modulation
    bool dp_sfwm = true; // dual-pump SFWM (the degenerate squeezing process)
    bool sp_sfwm = true; // single-pump SFWM into (m,s)/(s,n)
    bool bs_fwm = true;  // Bragg-scattering frequency conversion
    bool hp_sfwm = true; // hyper-parametric SFWM into (m,n)

    bool operator==(const ProcessToggles&) const = default;
};

// How the two pump detunings in SystemConfig::detunings are interpreted:
// absolute_detuning measures from the cold-cavity resonance, hot_offset from
// the SPM/XPM-shifted (hot) resonance.
enum class DetuningMode { absolute_detuning, hot_offset };

struct SystemConfig {
    double ring_radius = 0.0;          // m
    double ring_circumference = 0.0;   // m (2*pi*R, kept for the Lambda formula)
    std::array<double, 5> mode_frequencies{}; // rad/s, ordered [m, p1, s, p2, n]
    std::array<double, 5> loaded_q{};
    std::array<double, 5> intrinsic_q{};
    double lambda_coeff = 0.0;         // per-photon nonlinear rate, rad/s
    double group_velocity_ring = 0.0;  // m/s
    std::array<double, 5> group_velocity_channel{}; // m/s, per mode
    double pump_total_power = 0.0;     // W
    double pump_split = 0.5;           // fraction of power driving p1
    DetuningMode detuning_mode = DetuningMode::hot_offset;
    std::array<double, 2> detunings{}; // rad/s (meaning set by detuning_mode)
    ProcessToggles toggles{};

    bool operator==(const SystemConfig&) const = default;
};

// Reference configuration: 113 um Si3N4 ring, Q = 2e5 / 1e6, Lambda =
// 2*pi*0.62 rad/s, group index 2.05, 15 dBm total pump power split equally,
// pumps on the hot resonances, all processes enabled.
SystemConfig default_config();

// Expand (omega_s, FSR, second-order dispersion offset), all angular, into
// the five mode frequencies omega_J = omega_s + fsr*j + (d2/2)*j^2, j=-2..2.
std::array<double, 5> expand_frequencies(double omega_s, double fsr, double d2);

// Throws ConfigError (naming the offending quantity) on invariant violation.
void validate_config(const SystemConfig& cfg);

SystemConfig parse_config(const std::string& text); // throws ConfigError
SystemConfig load_config(const std::string& path);  // + IoError

// Canonical flat key-value form; parse_config(serialize_config(c)) round-trips
// every field to within 2*DBL_EPSILON relative.
std::string serialize_config(const SystemConfig& cfg);
void save_config(const SystemConfig& cfg, const std::string& path);

} // namespace rsq
