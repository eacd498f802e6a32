#pragma once
#include <optional>
#include <string>

#include <json.hpp>

#include "subwigner/config.hpp"

// Subcommand cores.  Everything here is in-process and returns strings /
// JSON, so the test suites exercise the exact logic the binary ships.
// Exit codes: 0 success, 1 validation error, 2 compare-threshold breach,
// 3 numerical-contract violation.

namespace subwigner::cli {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitThreshold = 2;
inline constexpr int kExitNumericalContract = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicates;
  std::optional<int> threads;
  std::optional<int> quad_nodes;
  std::optional<double> tolerance;
};

Config apply_overrides(Config cfg, const Overrides& ov);

// One row per statistic pair with all covariance forms and the Chebyshev
// limit, at the exact finite-L ratios.  Empty statistics block gives the
// header only.
std::string theory_csv(const Config& cfg);

// Full simulation report; deterministic except for the "timestamp" key,
// which is excluded from the config hash.
nlohmann::ordered_json simulate_report(const Config& cfg);

// Raw per-replicate trace dump: replicate,p,k,trace.
std::string raw_csv(const RawResults& raw);

struct CompareResult {
  std::string csv;
  bool any_flagged = false;
};

// z-score table from a theory CSV and a simulation report.
CompareResult compare_tables(const std::string& theory_csv_text,
                             const nlohmann::json& sim_report, double threshold);

// Pairwise kernel values on the configured grid points.
std::string kernel_csv(const Config& cfg);

struct GffResult {
  std::string covariance_csv;  // psd report in '#' header comments
  std::string samples_csv;
  PsdReport report;
};

GffResult gff_outputs(const Config& cfg);

// File-level drivers used by the binary; they catch domain errors and map
// them to exit codes, printing diagnostics to stderr.
int run_theory(const std::string& config_path, const std::string& out_path,
               const Overrides& ov);
int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& dump_raw_path, const Overrides& ov);
int run_compare(const std::string& theory_path, const std::string& sim_path,
                const std::string& out_path, const Overrides& ov);
int run_kernel(const std::string& config_path, const std::string& out_path,
               const Overrides& ov);
int run_gff(const std::string& config_path, const std::string& out_cov_path,
            const std::string& out_samples_path, const Overrides& ov);

}  // namespace subwigner::cli
