#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "retina/alpha_map.hpp"
#include "retina/strategy_pattern.hpp"
#include "retina/subjects.hpp"

namespace retina {

enum class StrategyKind { Naive, Serial, Bayes, Pattern };

std::string_view to_string(StrategyKind s);
/// ConfigError for anything but naive|serial|bayes|pattern.
StrategyKind parse_strategy(std::string_view name);

struct SyntheticMapSpec {
  Eigen::Index width = 100;
  Eigen::Index height = 100;
  double alpha_min = 0.005;
  double alpha_max = 0.2;
  std::uint64_t seed = 1;
};

/// Everything a run depends on besides the subject. Parsed from JSON:
///
///   {"strategy": "bayes", "targets": {"p_fp": 1e-10, "p_fn": 1e-4}, "K": 6,
///    "map": {"synthetic": {"width": 100, "height": 100, "alpha_min": 0.005,
///            "alpha_max": 0.2, "seed": 1}} | {"file": "map.json"},
///    "distribution": {"kind": "point_pair", "low": 0.05, "high": 0.15}
///                  | {"kind": "uniform_bands", "low": [a, b], "high": [c, d]},
///    "assumed_distribution": {...}, "intensity": 62.3,
///    "trials": 5000, "seed": 1, "max_rounds": 10000, "trace_walks": 100,
///    "threads": 0, "out": "out",
///    "naive": {"mu": 50, "p_correct": 0.5},
///    "pattern": {"low_max": 0.02, "high_min": 0.18, "n_noise": 75, "block": 7,
///                "intensity": 72, "M": 18, "m": 8, "k": 5, "l": 5}}
///
/// Every key is optional; defaults are the member initializers below.
/// Errors are ConfigError messages that name the offending field.
struct RunConfig {
  StrategyKind strategy = StrategyKind::Bayes;
  double p_fp = 1e-10;
  double p_fn = 1e-4;
  int K = 6;
  std::optional<std::filesystem::path> map_file;
  SyntheticMapSpec synthetic;
  AlphaDistribution distribution = PointPair{0.05, 0.15};
  std::optional<AlphaDistribution> assumed_distribution;
  std::optional<double> intensity;  ///< unset: solved from the class edges
  std::int64_t trials = 1000;
  std::uint64_t seed = 1;
  int max_rounds = 10000;
  int trace_walks = 100;
  int threads = 0;  ///< 0: hardware concurrency
  std::filesystem::path out = "out";
  int naive_mu = 50;
  double naive_p_correct = 0.5;
  PatternConfig pattern;
  PatternTestConfig pattern_test;

  void validate() const;
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Stable JSON echo of the config (keys in the order documented above).
std::string to_json(const RunConfig& config);

/// The config's map: loaded from file or generated.
AlphaMap resolve_map(const RunConfig& config);

/// "alice" | "eve:fair" | "eve:fixed:<p>" | "eve:uniform" | "eve:echo".
/// "interactive" is handled by the CLI since it needs a terminal.
SubjectModel parse_subject(std::string_view spec, int K);

}  // namespace retina
