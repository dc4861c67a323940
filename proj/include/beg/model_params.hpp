#pragma once

#include <cstdint>

namespace beg {

/// Control knobs of one network instance: neuron count N, threshold
/// coefficient gamma and load alpha, with the derived activity
/// p = ln(N)/N and pattern count M = max(1, floor(alpha N^2 / ln(N)^2)).
class ModelParams {
 public:
  /// Throws std::invalid_argument unless N >= 3, gamma >= 0, alpha > 0.
  ModelParams(std::int64_t n, double gamma, double alpha);

  /// Explicit activity and pattern count, bypassing the sparse scaling.
  /// Only meant for exercising the dynamics on small hand-built instances.
  static ModelParams with_activity(std::int64_t n, double activity, std::int64_t pattern_count,
                                   double gamma = 0.0);

  std::int64_t neuron_count() const noexcept { return n_; }
  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  double activity() const noexcept { return activity_; }
  std::int64_t pattern_count() const noexcept { return pattern_count_; }

  /// gamma * ln(N), the firing threshold of the thresholded dynamics.
  double threshold() const noexcept;

  bool operator==(const ModelParams&) const = default;

 private:
  friend class PatternSet;
  ModelParams() = default;

  std::int64_t n_ = 0;
  double gamma_ = 0.0;
  double alpha_ = 0.0;
  double activity_ = 0.0;
  std::int64_t pattern_count_ = 0;
};

/// ln(N)/N.
double sparse_activity(std::int64_t n);

/// max(1, floor(alpha N^2 / ln(N)^2)).
std::int64_t sparse_pattern_count(std::int64_t n, double alpha);

}  // namespace beg
