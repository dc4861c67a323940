#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "beg/kernels.hpp"
#include "beg/pattern_set.hpp"
#include "beg/ternary_config.hpp"

namespace beg {

enum class Variant {
  original,     // sgn(S) Theta(|S| + theta)
  thresholded,  // sgn(S) Theta(|S| + theta - gamma ln N)
};

/// Local fields at one neuron: the exact integer sign field S_i and the
/// activity field theta_i.
struct FieldPair {
  std::int64_t s = 0;
  double theta = 0.0;

  bool operator==(const FieldPair&) const = default;
};

/// Outcome of one application of the dynamics to a stored pattern.
struct StabilityReport {
  std::int32_t mu = 0;
  std::int64_t k = 0;
  std::int64_t zero_to_nonzero = 0;
  std::int64_t erased = 0;
  std::int64_t sign_flipped = 0;
  bool stable = true;
};

/// sgn(s) * Theta(|s| + theta - tau) with sgn(0) = 0 and Theta(0) = 1.
std::int8_t transfer(std::int64_t s, double theta, double tau) noexcept;

/// tau for the variant: 0 for original, gamma * ln N for thresholded.
/// Throws std::invalid_argument on negative gamma.
double firing_threshold(const PatternSet& ps, Variant variant, double gamma);

/// Scratch buffers for repeated field evaluations. J and K are never
/// materialized: overlaps of the probe with every pattern it touches are
/// accumulated through the inverted index, then scattered back onto those
/// patterns' active neurons. One instance per thread.
class FieldWorkspace {
 public:
  FieldWorkspace() = default;

  /// Computes S and theta for every neuron. Cost is
  /// O(sum of activities of the touched patterns + N).
  void evaluate(const PatternSet& ps, ConfigView probe);

  /// evaluate() followed by the transfer rule; result in output().
  void apply(const PatternSet& ps, ConfigView probe, Variant variant, double gamma);

  std::span<const std::int32_t> s() const noexcept { return s_; }
  std::span<const double> theta() const noexcept { return theta_; }
  std::span<const std::int8_t> probe() const noexcept { return probe_; }
  std::span<const std::int8_t> output() const noexcept { return out_; }

  StabilityReport check_stability(const PatternSet& ps, std::int32_t mu, Variant variant, double gamma);

 private:
  std::vector<std::int32_t> overlap_count_;  // per pattern, zero outside touched_
  std::vector<std::int32_t> overlap_sign_;
  std::vector<std::int32_t> touched_;
  std::vector<std::int8_t> probe_;
  std::vector<std::int32_t> s_;
  std::vector<std::int32_t> cover_;
  std::vector<double> theta_;
  std::vector<std::int8_t> out_;
};

/// Fields at a single neuron, gathered through the neuron's own
/// occurrence list. Throws std::invalid_argument on dimension mismatch and
/// std::out_of_range on a bad neuron id.
FieldPair local_fields(const PatternSet& ps, const TernaryConfig& probe, std::int32_t i);

/// Fields at every neuron; element i equals local_fields(ps, probe, i).
std::vector<FieldPair> all_fields(const PatternSet& ps, const TernaryConfig& probe);

inline constexpr std::int32_t kDenseOracleMaxNeurons = 512;

/// Reference fields from explicit dense J and K matrices. Test oracle only;
/// refuses N above kDenseOracleMaxNeurons.
std::vector<FieldPair> dense_oracle_fields(const PatternSet& ps, const TernaryConfig& probe);

/// One synchronous application of the dynamics: every component is
/// computed from the unmodified probe.
TernaryConfig apply_map(const PatternSet& ps, const TernaryConfig& probe, Variant variant, double gamma);

/// Applies the dynamics to pattern mu once and classifies every component
/// that changed. Throws std::out_of_range on a bad pattern id.
StabilityReport check_stability(const PatternSet& ps, std::int32_t mu, Variant variant, double gamma);

}  // namespace beg
