#pragma once

#include "qtile/io.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qtile {

/// A batch job: what to generate, what to analyse and what to write.
struct JobConfig {
  std::vector<std::string> sequence;  // explicit rule ids; takes precedence over rule x iters
  std::string rule;
  int iters = 0;
  std::string seed = "P";
  std::string out = "out";
  int peripheral_depth = 2;

  bool svg = false, json = false, csv = false, png = false;
  bool perp = false, stats = false, diffraction = false;

  double svg_half_width = 25.0;
  int histogram_bins = 32;
  double mirror_threshold = 0.0075;
  int surface_iterations = -1;  // -1: one per rule of the sequence
  int max_index = 6;
  double kperp_cutoff = 8.0;
  double strong_fraction = 0.01;
  double window_shift = 0.3;
  std::string control_rule = "para-penrose";  // empty: no control patch

  /// The rule ids the job will run.
  std::vector<std::string> resolved_sequence() const;
};

Json to_json(const JobConfig& c);
/// Fields absent from j keep their current values. Throws ConfigError on unknown keys or bad types.
void merge_json(JobConfig& c, const Json& j);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitUcViolation = 3,
  kExitAnalysis = 4,
  kExitIo = 5,
};

/// Checks the configuration against the rule catalog. Throws ConfigError.
void validate(const JobConfig& c, const RuleCatalog& cat = RuleCatalog::builtin());

struct JobResult {
  Json manifest;  // config, artifacts with hashes, summary
  std::string report;  // human-readable summary
};

/// Runs the job and writes its artifacts and manifest.json into c.out.
JobResult run_job(const JobConfig& c);

/// Catalog listing: id, family, chirality, shells, template sizes.
Json list_rules(const RuleCatalog& cat = RuleCatalog::builtin());

}  // namespace qtile
