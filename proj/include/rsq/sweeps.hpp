// Parameter studies built on the spectrum pipeline: power sweeps at the hot
// operating point, process ablations, 2D detuning maps, constrained
// symmetric-detuning sweeps, and detuning-space optimization of the
// squeezing. Every study evaluates independent operating points, so the
// drivers parallelize over a shared index-partitioned worker pool and gather
// results by index; output tables are bit-identical for any thread count.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "rsq/config.hpp"
#include "rsq/spectrum.hpp"

namespace rsq {

double dbm_to_watt(double dbm); // 1 mW * 10^(dBm/10); -inf maps to 0 W
double watt_to_dbm(double watt); // inverse; 0 W maps to -inf

enum class SweepKind { power, ablation, detuning_map, symmetric_constrained };

enum class ConstraintKind {
    none,
    fixed_energy_product, // E_p1 * E_p2 held at `value` (J^2)
    fixed_total_energy,   // E_p1 + E_p2 held at `value` (J)
    fixed_antisqueezing,  // s_max at Omega = 0 held at `value` (dB)
};

struct Constraint {
    ConstraintKind kind = ConstraintKind::none;
    double value = 0.0; // units per kind; must be positive when kind != none
};

// Uniformly spaced closed interval; count == 1 collapses to the point lo.
struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

std::vector<double> axis_grid(const AxisSpec& axis); // throws ConfigError

// Aggregate description of one study, as assembled by the CLI. The axes are
// interpreted per kind: power -> axis1 in dBm; detuning_map -> axis1/axis2
// are pump-detuning offsets from hot resonance (rad/s);
// symmetric_constrained -> axis1 is the first pump's offset (the second gets
// the negative). `omegas` lists sideband evaluation points (rad/s) for the
// kinds that record full spectra; scalar squeezing numbers are always the
// analytic quadrature extremes at Omega = 0.
struct SweepSpec {
    SweepKind kind = SweepKind::power;
    AxisSpec axis1{}, axis2{};
    Constraint constraint{};
    Mode mode = Mode::s;
    std::vector<double> omegas;
};

// Throws ConfigError naming the offending field: axes must be finite with
// hi >= lo and count >= 1 (count > 1 requires hi > lo); the constraint value
// must be positive when a constraint is set; omegas must be finite.
void validate_sweep_spec(const SweepSpec& spec);

// ---------------------------------------------------------------------------

struct PowerSweepRow {
    double power_dbm = 0.0;
    double power_watt = 0.0;
    std::array<double, 2> hot_detuning{}; // absolute pump detunings, rad/s
    double s_min0 = 1.0, s_max0 = 1.0;    // quadrature extremes at Omega = 0
    SpectrumResult spectrum;              // grid = requested omegas plus 0
    bool ok = true;
    std::string error;                    // failure description when !ok
};

// One row per requested total power, pumps held on the hot resonances
// (offsets zero). Per-point failures (pump fold, unstable linearization) are
// recorded in the row, never thrown.
std::vector<PowerSweepRow> sweep_power(const SystemConfig& cfg,
                                       const std::vector<double>& powers_dbm,
                                       const std::vector<double>& omegas = {},
                                       int threads = 0);

// ---------------------------------------------------------------------------

struct AblationRow {
    std::string label;
    ProcessToggles toggles{};
    double s_min0 = 1.0, s_max0 = 1.0;
    SpectrumResult spectrum;
};

// Canonical label for a toggle combination: "all", "dp", "dp_sp", "dp_bs",
// "no_hp", or the joined list of enabled parametric processes.
std::string ablation_label(const ProcessToggles& toggles);

// The five combinations studied in the ablation figure: dp, dp_sp, dp_bs,
// no_hp, all.
std::vector<ProcessToggles> standard_ablation_combos();

// Spectra for several process combinations at the operating point described
// by cfg (same pumps and detunings for every combo; the classical steady
// state only involves SPM/XPM, so it is shared). The degenerate squeezing
// process and both pump self-interactions must stay on in every combo —
// turning them off changes the operating point itself rather than ablating a
// fluctuation pathway — otherwise ConfigError.
std::vector<AblationRow> ablate_processes(const SystemConfig& cfg,
                                          const std::vector<ProcessToggles>& combos,
                                          const std::vector<double>& omegas = {});

// ---------------------------------------------------------------------------

struct DetuningMap {
    std::vector<double> delta1, delta2;      // offsets from hot resonance, rad/s
    std::vector<std::vector<double>> s_min0; // [i1][i2] at Omega = 0; NaN = gap
    std::vector<std::vector<double>> s_max0;
    int failures = 0;                        // number of gap points
    double best_delta1 = 0.0, best_delta2 = 0.0;
    double best_s_min0 = 1.0;                // min over valid points
    std::vector<std::string> warnings;       // per-point failure notes, index order
};

// s_min/s_max at Omega = 0 over a grid of pump-detuning offsets from the hot
// resonances. Unstable or otherwise failing grid points become NaN gaps with
// a warning, never an exception. The argmin over valid points is reported
// (row-major first on ties).
DetuningMap map_detuning(const SystemConfig& cfg, const AxisSpec& delta1_axis,
                         const AxisSpec& delta2_axis, int threads = 0);

// ---------------------------------------------------------------------------

struct SymmetricSweepRow {
    double delta = 0.0;            // first pump's offset; second gets -delta
    double power_watt = 0.0;       // total input power satisfying the constraint
    double power_dbm = 0.0;
    double constraint_value = 0.0; // achieved value of the constrained quantity
    double residual = 0.0;         // |achieved - target| / target
    double s_min0 = 1.0, s_max0 = 1.0;
    double photon_ratio = 0.0;     // (n_m + n_n) / n_s
    bool ok = true;
    std::string error;
};

// For each offset delta in the axis (pumps at +delta / -delta from hot), find
// by bisection the total input power at which the constrained quantity meets
// its target within 0.1%, then record the squeezing extremes and the
// sideband photon ratio at that power. The power ceiling is the largest
// feasible drive minus a 5% margin (located by bisection on the failure
// boundary when the search meets an unstable or folding point); targets
// beyond it make the row an error, never an exception.
std::vector<SymmetricSweepRow> sweep_symmetric(const SystemConfig& cfg,
                                               const AxisSpec& delta_axis,
                                               const Constraint& constraint,
                                               int threads = 0);

// ---------------------------------------------------------------------------

struct BestSqueezingRow {
    double power_dbm = 0.0;
    std::string label; // ablation_label of the toggle set
    ProcessToggles toggles{};
    double delta1 = 0.0, delta2 = 0.0; // optimal offsets, rad/s
    double s_min0 = 1.0, s_max0 = 1.0; // extremes at the optimum
    int failures = 0;                  // unstable points met during the search
    bool ok = true;
    std::string error;
};

// Global-in-practice optimum of s_min(Omega = 0) over the 2D detuning space
// for every (power, toggle set) pair: coarse grid scan over the given axes
// followed by a derivative-free simplex polish from the best grid point.
// Unstable points encountered by the search count as failures and are
// treated as shot noise (never optimal).
std::vector<BestSqueezingRow> best_squeezing(const SystemConfig& cfg,
                                             const std::vector<double>& powers_dbm,
                                             const std::vector<ProcessToggles>& toggle_sets,
                                             const AxisSpec& delta1_axis,
                                             const AxisSpec& delta2_axis,
                                             int threads = 0);

} // namespace rsq
