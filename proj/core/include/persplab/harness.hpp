#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persplab/gridworld.hpp"
#include "persplab/perspective.hpp"
#include "persplab/rng.hpp"
#include "persplab/selection.hpp"
#include "persplab/theory.hpp"

namespace persplab {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class ExperimentKind { strategies, validate_thm1, warmup, counterexample };

std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

struct PerspectiveSpec {
  enum class Construction { basis, random };
  Construction construction = Construction::basis;
  int duplicate_first = 12;              // basis: extra copies of e_1
  int count = 40;                        // random: number of rows
  std::optional<double> threshold = 0.5; // random: zero entries below this
  std::optional<int> take;               // keep only the first `take` perspectives

  bool operator==(const PerspectiveSpec&) const = default;
};

PerspectiveSet build_perspectives(const PerspectiveSpec& spec, int feature_dim, Rng& rng);

/// One curve of an experiment: a perspective construction observed under a
/// selection strategy.
struct Arm {
  std::string label;
  PerspectiveSpec perspectives;
  Strategy strategy = Strategy::uniform;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::strategies;
  GridSpec grid;
  int horizon = 30;
  int budget = 60;
  std::vector<std::uint64_t> seeds;
  PerspectiveSpec perspectives;
  std::vector<Strategy> strategies;
  std::vector<int> subset_sizes;  // validate-thm1: Subset/Random sizes
  SelectionParams selection;
  double noise_sd = 0.1;          // warmup observation noise
  int parallel = 1;
  std::string out_dir = "results";

  /// Throws ConfigError.
  void validate() const;
};

/// Defaults of every experiment kind (full-size settings).
ExperimentConfig default_config(ExperimentKind kind);

/// Parses a JSON configuration document on top of the kind's defaults.
/// Throws ConfigError on malformed input or unknown keys.
ExperimentConfig parse_config(std::string_view json_text,
                              std::optional<ExperimentKind> kind = std::nullopt);
std::string config_to_json(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical JSON echo, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// "5" -> seeds 1..5; "3,8,13" -> that list.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

std::vector<Arm> experiment_arms(const ExperimentConfig& config);

struct RunRecord {
  std::uint64_t seed = 0;
  std::string strategy;
  int t = 0;
  int perspective = 0;
  double normalized_reward = 0.0;
  std::vector<double> residuals;
};

struct AggregateCurve {
  std::string strategy;
  int t = 0;
  double mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int n = 0;
};

struct SeedStatus {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string message;
};

struct Theorem1Row {
  std::uint64_t seed = 0;
  std::string arm;
  Theorem1Report report;
};

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::vector<AggregateCurve> curves;
  std::vector<SeedStatus> status;
  std::vector<Theorem1Row> theorem1;  // validate-thm1 only, at the final budget
  double wall_seconds = 0.0;

  bool ok() const;
};

struct BootstrapCi {
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap of the mean.
BootstrapCi bootstrap_mean_ci(std::span<const double> values, int resamples, Rng& rng);

inline constexpr int kBootstrapResamples = 2000;

struct CurvePoint {
  std::string label;
  int t = 0;
  double value = 0.0;
};

/// Per (label, t) means with 95% percentile-bootstrap intervals, in order
/// of first appearance of each label and increasing t.
std::vector<AggregateCurve> aggregate_points(const std::vector<CurvePoint>& points,
                                             int resamples = kBootstrapResamples);
std::vector<AggregateCurve> aggregate_curves(const std::vector<RunRecord>& records,
                                             int resamples = kBootstrapResamples);

/// Runs `strategies` and `validate-thm1` experiments. Per seed: build the
/// world, plan the expert, then for every arm observe one demonstration per
/// step, match features with count weights and log J_L / J*. Seeds that
/// throw are reported in `status`; the others still complete.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct WarmupRecord {
  std::uint64_t seed = 0;
  std::string strategy;  // "greedy" or "fixed"
  int t = 0;
  int perspective = 0;
  double error = 0.0;    // ||psi_hat - psi_E||_2
  double log_det = 0.0;  // log det V after the update
};

struct WarmupResult {
  std::vector<WarmupRecord> records;
  std::vector<AggregateCurve> curves;  // mean estimation error
  std::vector<SeedStatus> status;
  double wall_seconds = 0.0;

  bool ok() const;
};

/// Ridge estimation study on grid-world experts: greedy log-det selection
/// against repeating one perspective drawn from the configured set, with
/// Gaussian observation noise.
WarmupResult run_warmup(const ExperimentConfig& config);

struct FileManifest {
  std::vector<std::filesystem::path> files;
};

/// Writes runs.csv, curves.csv, manifest.json (and thm1.csv when present).
/// Throws IoError.
FileManifest write_results(const ExperimentResult& result, const ExperimentConfig& config,
                           const std::filesystem::path& out_dir);

FileManifest write_warmup_results(const WarmupResult& result, const ExperimentConfig& config,
                                  const std::filesystem::path& out_dir);

std::string runs_csv(const std::vector<RunRecord>& records);
std::string warmup_csv(const std::vector<WarmupRecord>& records);
std::string curves_csv(const std::vector<AggregateCurve>& curves);
std::vector<AggregateCurve> parse_curves_csv(std::string_view text);

/// Line plot of mean curves with CI bands.
std::string render_curves_svg(const std::vector<AggregateCurve>& curves, std::string_view title);

/// JSON summary of the conjunction counterexample: per-dimension marginals
/// and returns for always-left, always-right and the given mixtures.
std::string counterexample_summary_json(std::span<const Rational> mixtures);

}  // namespace persplab
