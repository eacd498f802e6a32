#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subwigner/gff.hpp"
#include "subwigner/montecarlo.hpp"

// JSON config schema shared by every subcommand.  Parsing is strict: unknown
// keys anywhere in the document are rejected with the offending path.

namespace subwigner {

struct RunConfig {
  std::uint64_t L = 1;
  std::uint64_t replicates = 2;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct QuadratureConfig {
  int contour_nodes = 256;
  int kernel_nodes = 256;
  double tolerance = 5.0;   // |z| threshold for compare
  double gff_epsilon = 1e-3;
  double psd_tol = 1e-8;
};

struct GridConfig {
  std::vector<SheetPoint> points;
  int samples = 0;
};

struct Config {
  std::optional<EnsembleSpec> ensemble;
  std::optional<GoodFamily> family;
  std::vector<StatSpec> statistics;
  std::optional<RunConfig> run;
  QuadratureConfig quadrature;
  std::optional<GridConfig> grid;
};

// Strict parse; throws ValidationError with a path-qualified message.
Config parse_config(const nlohmann::json& j);
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);

// Canonical re-serialization of the parsed config.  Excludes run.threads, so
// worker count never changes identity.  Basis of the report's config hash.
nlohmann::ordered_json canonical_config(const Config& cfg);

// FNV-1a 64-bit over a string; stable across platforms and runs.
std::uint64_t fnv1a(const std::string& text);

// "%.17g" rendering used by every CSV emitter.
std::string format_double(double v);

// Assembles the parts a simulation needs; throws if blocks are missing.
ExperimentSpec to_experiment(const Config& cfg);

}  // namespace subwigner
