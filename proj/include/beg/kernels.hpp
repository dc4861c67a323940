#pragma once

// Per-neuron inner loops of the field evaluation. Every kernel exists as a
// scalar reference and, where the CPU allows, an AVX2 variant that must
// produce bitwise-identical output. The active table is chosen at runtime.

#include <cstdint>
#include <span>
#include <string_view>

namespace beg::kernels {

/// Probe-wide constants of the activity-field decomposition.
///
/// With s = supp(probe), for neuron i let e_i = [i in s] d_i and
/// m_i = |s| - [i in s]. Then
///   theta_i (1-p)^2 = (X_i - e_i) - p m_i d_i - p (D_s - e_i - p m_i M)
/// where X_i = sum over patterns mu active at i of |s ∩ supp(xi^mu)| and
/// D_s = sum of degrees over s.
struct ThetaTerms {
  double activity = 0.0;         // p
  double support = 0.0;          // |s|
  double support_degrees = 0.0;  // D_s
  double pattern_count = 0.0;    // M
  double inv_norm = 1.0;         // 1 / (1-p)^2
};

/// One lane of the theta kernel. The SIMD variants replicate this exact
/// operation order.
inline double theta_lane(std::int32_t cover, std::int32_t degree, std::int8_t probe_spin,
                         const ThetaTerms& t) noexcept {
  const std::int32_t in = probe_spin != 0 ? 1 : 0;
  const std::int32_t self = in * degree;
  const double pm = t.activity * (t.support - static_cast<double>(in));
  const double local = static_cast<double>(cover - self) - pm * static_cast<double>(degree);
  const double global = (t.support_degrees - static_cast<double>(self)) - pm * t.pattern_count;
  return (local - t.activity * global) * t.inv_norm;
}

/// sgn(s) * Theta(|s| + theta - tau), sgn(0) = 0, Theta(0) = 1.
inline std::int8_t transfer_lane(std::int32_t s, double theta, double tau) noexcept {
  const std::int32_t mag = s < 0 ? -s : s;
  const double v = (static_cast<double>(mag) + theta) - tau;
  if (!(v >= 0.0)) return 0;
  return static_cast<std::int8_t>((s > 0) - (s < 0));
}

struct ErrorTally {
  std::int64_t zero_to_nonzero = 0;
  std::int64_t erased = 0;
  std::int64_t sign_flipped = 0;

  bool operator==(const ErrorTally&) const = default;
};

struct KernelTable {
  std::string_view name;
  void (*theta)(std::span<const std::int32_t> cover, std::span<const std::int32_t> degree,
                std::span<const std::int8_t> probe, const ThetaTerms& terms, std::span<double> out);
  void (*transfer)(std::span<const std::int32_t> s, std::span<const double> theta, double tau,
                   std::span<std::int8_t> out);
  ErrorTally (*tally)(std::span<const std::int8_t> expected, std::span<const std::int8_t> actual);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

enum class Backend { automatic, scalar, avx2 };

/// Table used by the dynamics. Defaults to the best supported backend;
/// BEG_KERNELS=scalar in the environment forces the reference path.
const KernelTable& active_table() noexcept;

/// Overrides the active table. Returns false (and changes nothing) when the
/// requested backend is unavailable. Not thread-safe against concurrent use.
bool select_backend(Backend backend) noexcept;

namespace detail {
// Defined in the AVX2 translation unit when it is built.
const KernelTable* avx2_table_impl() noexcept;
}  // namespace detail

}  // namespace beg::kernels
