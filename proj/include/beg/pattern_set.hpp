#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "beg/model_params.hpp"
#include "beg/ternary_config.hpp"

namespace beg {

/// Thrown when an experiment would exceed the configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationLimits {
  /// Upper bound on M * N (the dense-equivalent size of the pattern array).
  std::uint64_t max_cells = std::uint64_t{1} << 40;
};

/// One entry of the inverted index: pattern mu is active at this neuron.
struct Occurrence {
  std::int32_t pattern;
  std::int8_t sign;

  bool operator==(const Occurrence&) const = default;
};

/// M sparse ternary patterns over N neurons plus the neuron -> pattern
/// inverted index. Immutable once built; safe to share across threads.
///
/// Both directions are stored in CSR form: pattern entries grouped by mu
/// (sorted by neuron), occurrences grouped by neuron (sorted by mu).
class PatternSet {
 public:
  /// Draws every entry independently: 0 with probability 1 - p, +1 and -1
  /// with probability p/2 each. Pattern mu uses its own stream seeded from
  /// (master_seed, mu), so results do not depend on generation order.
  static PatternSet generate(const ModelParams& params, std::uint64_t master_seed,
                             const GenerationLimits& limits = {});

  /// Wraps explicit patterns. The count must equal params.pattern_count()
  /// and every dimension must equal params.neuron_count().
  static PatternSet from_patterns(const ModelParams& params, std::span<const TernaryConfig> patterns,
                                  std::uint64_t master_seed = 0);

  const ModelParams& params() const noexcept { return params_; }
  std::int32_t neuron_count() const noexcept { return n_; }
  std::int32_t pattern_count() const noexcept { return m_; }
  double activity() const noexcept { return params_.activity(); }
  std::uint64_t master_seed() const noexcept { return master_seed_; }

  /// Nonzero entries of pattern mu, sorted by neuron. Unchecked.
  std::span<const SpinEntry> pattern_entries(std::int32_t mu) const noexcept {
    return {entries_.data() + pattern_offsets_[mu], entries_.data() + pattern_offsets_[mu + 1]};
  }
  ConfigView pattern_view(std::int32_t mu) const noexcept { return {n_, pattern_entries(mu)}; }

  /// Checked copy of pattern mu. Throws std::out_of_range.
  TernaryConfig pattern(std::int32_t mu) const;

  /// Patterns active at neuron i, sorted by mu. Unchecked.
  std::span<const Occurrence> occurrences(std::int32_t i) const noexcept {
    return {occurrences_.data() + neuron_offsets_[i], occurrences_.data() + neuron_offsets_[i + 1]};
  }

  /// d_i = number of patterns active at neuron i.
  std::span<const std::int32_t> degrees() const noexcept { return degrees_; }
  std::int64_t total_active() const noexcept { return static_cast<std::int64_t>(entries_.size()); }

  /// Activity k of pattern mu. Throws std::out_of_range.
  std::int64_t activity_of(std::int32_t mu) const;

  /// Versioned binary snapshot (header: N, M, p, master_seed).
  void save(std::ostream& out) const;
  static PatternSet load(std::istream& in);

  bool operator==(const PatternSet&) const = default;

 private:
  PatternSet(const ModelParams& params, std::uint64_t seed, std::vector<std::int64_t> pattern_offsets,
             std::vector<SpinEntry> entries);

  void build_inverted_index();

  ModelParams params_;
  std::int32_t n_ = 0;
  std::int32_t m_ = 0;
  std::uint64_t master_seed_ = 0;
  std::vector<std::int64_t> pattern_offsets_;
  std::vector<SpinEntry> entries_;
  std::vector<std::int64_t> neuron_offsets_;
  std::vector<Occurrence> occurrences_;
  std::vector<std::int32_t> degrees_;
};

}  // namespace beg
