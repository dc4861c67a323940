#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace beg {

/// One nonzero coordinate of a ternary configuration.
struct SpinEntry {
  std::int32_t index;
  std::int8_t spin;  // -1 or +1

  bool operator==(const SpinEntry&) const = default;
};

/// Read-only view of a sparse configuration: sorted, nonzero entries only.
struct ConfigView {
  std::int32_t n = 0;
  std::span<const SpinEntry> entries;
};

/// Element of {-1, 0, +1}^n stored as a sorted list of its nonzero entries.
class TernaryConfig {
 public:
  TernaryConfig() = default;

  /// Entries may come in any order; throws std::invalid_argument on an index
  /// outside [0, n), a duplicate index, or a spin not in {-1, +1}.
  TernaryConfig(std::int32_t n, std::vector<SpinEntry> entries);

  /// From a dense vector of spins in {-1, 0, +1}.
  static TernaryConfig from_dense(std::span<const std::int8_t> spins);

  /// All-zero configuration.
  static TernaryConfig zeros(std::int32_t n);

  std::int32_t dimension() const noexcept { return n_; }
  std::int64_t support_size() const noexcept { return static_cast<std::int64_t>(entries_.size()); }
  std::span<const SpinEntry> entries() const noexcept { return entries_; }
  ConfigView view() const noexcept { return {n_, entries_}; }

  /// Spin at index i (0 when absent). Throws std::out_of_range.
  std::int8_t at(std::int32_t i) const;

  std::vector<std::int8_t> to_dense() const;

  bool operator==(const TernaryConfig&) const = default;

 private:
  std::int32_t n_ = 0;
  std::vector<SpinEntry> entries_;
};

}  // namespace beg
