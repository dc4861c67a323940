#include "beg/ternary_config.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace beg {

TernaryConfig::TernaryConfig(std::int32_t n, std::vector<SpinEntry> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  std::sort(entries_.begin(), entries_.end(),
            [](const SpinEntry& a, const SpinEntry& b) { return a.index < b.index; });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (e.index < 0 || e.index >= n)
      throw std::invalid_argument("index " + std::to_string(e.index) + " outside [0, " + std::to_string(n) + ")");
    if (e.spin != 1 && e.spin != -1)
      throw std::invalid_argument("stored spin must be -1 or +1 at index " + std::to_string(e.index));
    if (k > 0 && entries_[k - 1].index == e.index)
      throw std::invalid_argument("duplicate index " + std::to_string(e.index));
  }
}

TernaryConfig TernaryConfig::from_dense(std::span<const std::int8_t> spins) {
  std::vector<SpinEntry> entries;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    const auto s = spins[i];
    if (s < -1 || s > 1) throw std::invalid_argument("spin outside {-1, 0, +1}");
    if (s != 0) entries.push_back({static_cast<std::int32_t>(i), s});
  }
  return TernaryConfig(static_cast<std::int32_t>(spins.size()), std::move(entries));
}

TernaryConfig TernaryConfig::zeros(std::int32_t n) { return TernaryConfig(n, {}); }

std::int8_t TernaryConfig::at(std::int32_t i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("index outside configuration");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const SpinEntry& e, std::int32_t v) { return e.index < v; });
  return (it != entries_.end() && it->index == i) ? it->spin : std::int8_t{0};
}

std::vector<std::int8_t> TernaryConfig::to_dense() const {
  std::vector<std::int8_t> out(static_cast<std::size_t>(n_), 0);
  for (const auto& e : entries_) out[static_cast<std::size_t>(e.index)] = e.spin;
  return out;
}

}  // namespace beg
