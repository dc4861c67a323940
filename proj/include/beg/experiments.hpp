#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "beg/dynamics.hpp"
#include "beg/pattern_set.hpp"

namespace beg {

/// One (variant, N, gamma, alpha) cell of an experiment.
struct CellSpec {
  Variant variant = Variant::thresholded;
  std::int64_t n = 0;
  double gamma = 0.0;  // ignored (reported as 0) for the original variant
  double alpha = 0.0;
};

struct RunOptions {
  int trials = 200;
  int patterns_per_set = 1;
  int threads = 1;
  bool record_timing = false;  // wall_seconds stays 0 unless set, keeping rows byte-stable
  GenerationLimits limits{};
};

/// Aggregated stability statistics of one cell. The fractions count tested
/// patterns with at least one error of the given type.
struct ResultRow {
  std::int64_t n = 0;
  double gamma = 0.0;
  double alpha = 0.0;
  std::int64_t m = 0;
  std::int64_t trials = 0;
  std::int64_t tested_patterns = 0;
  double unstable_fraction = 0.0;
  double zero_on_fraction = 0.0;
  double erase_fraction = 0.0;
  double flip_fraction = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;

  // Raw counts behind the fractions; not part of the CSV schema.
  std::int64_t unstable = 0;
  std::int64_t zero_on = 0;
  std::int64_t erase = 0;
  std::int64_t flip = 0;
  std::int64_t active_patterns = 0;  // tested patterns with k >= 1

  bool operator==(const ResultRow&) const = default;
};

struct BisectionSpec {
  double lo = 0.0;
  double hi = 0.0;
  double target_fraction = 0.5;
  int max_iters = 8;

  bool operator==(const BisectionSpec&) const = default;
};

struct ExperimentConfig {
  Variant variant = Variant::thresholded;
  std::vector<std::int64_t> n_list;
  std::vector<double> gamma_list;
  std::vector<double> alpha_list;
  std::optional<BisectionSpec> bisection;
  int trials = 200;
  int patterns_per_set = 1;
  std::uint64_t master_seed = 1;
  int threads = 1;
  bool record_timing = false;
  std::uint64_t max_cells = GenerationLimits{}.max_cells;

  RunOptions run_options() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Raised when the bisection bracket does not straddle the target fraction.
/// Carries the two bracket rows for the audit trail.
class StraddleError : public std::runtime_error {
 public:
  StraddleError(const std::string& what, std::vector<ResultRow> rows)
      : std::runtime_error(what), rows_(std::move(rows)) {}

  const std::vector<ResultRow>& rows() const noexcept { return rows_; }

 private:
  std::vector<ResultRow> rows_;
};

/// Throws std::invalid_argument on trials < 1, N < 3, alpha <= 0, gamma < 0.
void validate(const ExperimentConfig& cfg);

/// 95% Wilson score interval for `successes` out of `n`.
std::pair<double, double> wilson_interval(std::int64_t successes, std::int64_t n, double z = 1.959963984540054);

/// Runs `trials` independent trials. Trial t draws a fresh pattern set from
/// derive_seed(seed, t) and tests patterns 0 .. patterns_per_set-1. The
/// result does not depend on opts.threads.
ResultRow run_cell(const CellSpec& cell, const RunOptions& opts, std::uint64_t seed);

/// Sorted cartesian product N x gamma x alpha; cell c runs with
/// derive_seed(master_seed, c). The original variant uses the single gamma 0.
std::vector<ResultRow> run_grid(const ExperimentConfig& cfg);

struct CriticalEstimate {
  double alpha_hat = 0.0;
  std::vector<ResultRow> rows;  // every evaluated cell, in evaluation order
};

/// Bisection on alpha for the crossing of unstable_fraction through the
/// target. All evaluations share `seed`, so pattern mu is the same draw at
/// every load. Stops early once a midpoint's Wilson interval contains the
/// target; otherwise returns the final bracket midpoint after max_iters.
CriticalEstimate estimate_critical_alpha(Variant variant, std::int64_t n, double gamma, const BisectionSpec& spec,
                                         const RunOptions& opts, std::uint64_t seed);

struct CriticalOutcome {
  std::int64_t n = 0;
  double gamma = 0.0;
  std::optional<double> alpha_hat;
  std::vector<ResultRow> rows;
  std::string error;  // set when the bracket did not straddle the target
};

/// estimate_critical_alpha for every sorted (N, gamma) pair of a config with
/// a bisection spec; pair c uses derive_seed(master_seed, c). Straddle
/// failures are recorded per pair instead of aborting the run.
std::vector<CriticalOutcome> run_critical(const ExperimentConfig& cfg);

/// Spearman rank correlation (average ranks for ties).
double spearman_correlation(std::span<const double> x, std::span<const double> y);

const char* to_string(Variant v) noexcept;
Variant parse_variant(const std::string& s);

}  // namespace beg
