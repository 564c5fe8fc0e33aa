// Text renderings of the library's result tables: CSV (default) and JSON
// (same columns as arrays of records), plus the run manifest written next to
// every output file. Data tables open with a comment block carrying the full
// resolved configuration, so each file is a self-describing reproducibility
// stamp; doubles are printed with %.17g, which round-trips exactly, making
// re-rendered tables byte-identical.
//
// Unit conventions in tables: frequencies and detunings are plain Hz (the
// angular value divided by 2*pi, matching the omega_hz spectrum column);
// squeezing appears both linear (shot noise = 1) and as 10*log10(S) dB.
// Gaps and failed rows render as "nan" in CSV and null in JSON.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rsq/config.hpp"
#include "rsq/drift.hpp"
#include "rsq/pump.hpp"
#include "rsq/spectrum.hpp"
#include "rsq/sweeps.hpp"

namespace rsq {

inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name); // "csv" | "json", else ConfigError
const char* format_extension(OutputFormat format);  // "csv" | "json"

std::string format_full(double v); // %.17g

// The resolved configuration as '# '-prefixed lines for CSV headers.
std::string config_comment_block(const SystemConfig& cfg);

std::string render_spectrum(const SpectrumResult& res, const SystemConfig& cfg,
                            OutputFormat format);
std::string render_photons(const PhotonNumbers& pn, const SystemConfig& cfg,
                           OutputFormat format);
std::string render_steady_state(const PumpSteadyState& steady, const SystemConfig& cfg,
                                OutputFormat format);
// Generic two-column key/value table (used for scalar reports).
std::string render_key_values(const std::string& kind,
                              const std::vector<std::pair<std::string, double>>& rows,
                              const SystemConfig& cfg, OutputFormat format);
std::string render_power_sweep(const std::vector<PowerSweepRow>& rows,
                               const SystemConfig& cfg, OutputFormat format);
std::string render_ablation(const std::vector<AblationRow>& rows,
                            const SystemConfig& cfg, OutputFormat format);
std::string render_detuning_map(const DetuningMap& map, const SystemConfig& cfg,
                                OutputFormat format);
std::string render_symmetric_sweep(const std::vector<SymmetricSweepRow>& rows,
                                   const Constraint& constraint, const SystemConfig& cfg,
                                   OutputFormat format);
std::string render_best_squeezing(const std::vector<BestSqueezingRow>& rows,
                                  const SystemConfig& cfg, OutputFormat format);
// The drift matrix as ten rows of interleaved re/im column pairs.
std::string render_matrix(const DriftMatrix& mtx, const SystemConfig& cfg,
                          OutputFormat format);

// Human-readable derived-rates report printed by the validate subcommand:
// per-mode decay and coupling rates, escape efficiencies, the s-mode
// linewidth, and the drive summary.
std::string rates_report(const SystemConfig& cfg);

// Record of one CLI invocation, written as JSON alongside the output files.
// Re-running the recorded command with the embedded config reproduces every
// data file byte-identically (the manifest itself carries the timestamp).
struct RunManifest {
    std::string subcommand;
    std::string timestamp;            // ISO 8601 UTC; filled by the CLI
    std::vector<std::string> command; // argv as invoked
    SystemConfig config;              // resolved snapshot
    std::vector<std::string> outputs; // files written, in emission order
    std::vector<std::string> warnings;
};

std::string render_manifest(const RunManifest& manifest);

std::string utc_timestamp(); // current time, "YYYY-MM-DDTHH:MM:SSZ"

void write_text_file(const std::string& path, const std::string& content); // IoError

} // namespace rsq
