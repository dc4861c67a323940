#include <cassert>

#include "beg/kernels.hpp"

namespace beg::kernels {
namespace {

void theta_scalar(std::span<const std::int32_t> cover, std::span<const std::int32_t> degree,
                  std::span<const std::int8_t> probe, const ThetaTerms& terms, std::span<double> out) {
  assert(cover.size() == out.size() && degree.size() == out.size() && probe.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = theta_lane(cover[i], degree[i], probe[i], terms);
}

void transfer_scalar(std::span<const std::int32_t> s, std::span<const double> theta, double tau,
                     std::span<std::int8_t> out) {
  assert(s.size() == out.size() && theta.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = transfer_lane(s[i], theta[i], tau);
}

ErrorTally tally_scalar(std::span<const std::int8_t> expected, std::span<const std::int8_t> actual) {
  assert(expected.size() == actual.size());
  ErrorTally t;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto e = expected[i];
    const auto a = actual[i];
    if (e == a) continue;
    if (e == 0) {
      ++t.zero_to_nonzero;
    } else if (a == 0) {
      ++t.erased;
    } else {
      ++t.sign_flipped;
    }
  }
  return t;
}

constexpr KernelTable kScalar{"scalar", theta_scalar, transfer_scalar, tally_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace beg::kernels
