// Compiled with -mavx2 (no FMA); only reached after a runtime CPU check.

#include <immintrin.h>

#include <cassert>
#include <cstring>

#include "beg/kernels.hpp"

namespace beg::kernels {
namespace {

inline __m128i load_spins4(const std::int8_t* p) {
  std::int32_t packed;
  std::memcpy(&packed, p, sizeof(packed));
  return _mm_cvtepi8_epi32(_mm_cvtsi32_si128(packed));
}

inline void store_spins4(std::int8_t* p, __m128i v) {
  const __m128i bytes = _mm_packs_epi16(_mm_packs_epi32(v, v), _mm_setzero_si128());
  const std::int32_t packed = _mm_cvtsi128_si32(bytes);
  std::memcpy(p, &packed, sizeof(packed));
}

void theta_avx2(std::span<const std::int32_t> cover, std::span<const std::int32_t> degree,
                std::span<const std::int8_t> probe, const ThetaTerms& terms, std::span<double> out) {
  assert(cover.size() == out.size() && degree.size() == out.size() && probe.size() == out.size());
  const std::size_t n = out.size();
  const __m256d p = _mm256_set1_pd(terms.activity);
  const __m256d support = _mm256_set1_pd(terms.support);
  const __m256d support_degrees = _mm256_set1_pd(terms.support_degrees);
  const __m256d patterns = _mm256_set1_pd(terms.pattern_count);
  const __m256d inv_norm = _mm256_set1_pd(terms.inv_norm);
  const __m128i ones = _mm_set1_epi32(1);
  const __m128i zero = _mm_setzero_si128();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i cov = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cover.data() + i));
    const __m128i deg = _mm_loadu_si128(reinterpret_cast<const __m128i*>(degree.data() + i));
    const __m128i is_zero = _mm_cmpeq_epi32(load_spins4(probe.data() + i), zero);
    const __m128i in = _mm_add_epi32(is_zero, ones);  // -1 + 1 = 0 where inactive
    const __m128i self = _mm_mullo_epi32(in, deg);

    const __m256d pm = _mm256_mul_pd(p, _mm256_sub_pd(support, _mm256_cvtepi32_pd(in)));
    const __m256d local = _mm256_sub_pd(_mm256_cvtepi32_pd(_mm_sub_epi32(cov, self)),
                                        _mm256_mul_pd(pm, _mm256_cvtepi32_pd(deg)));
    const __m256d global = _mm256_sub_pd(_mm256_sub_pd(support_degrees, _mm256_cvtepi32_pd(self)),
                                         _mm256_mul_pd(pm, patterns));
    const __m256d theta = _mm256_mul_pd(_mm256_sub_pd(local, _mm256_mul_pd(p, global)), inv_norm);
    _mm256_storeu_pd(out.data() + i, theta);
  }
  for (; i < n; ++i) out[i] = theta_lane(cover[i], degree[i], probe[i], terms);
}

// Lane masks indexed by the 4-bit result of _mm256_movemask_pd.
alignas(16) constexpr std::int32_t kLaneMasks[16][4] = {
    {0, 0, 0, 0},   {-1, 0, 0, 0},   {0, -1, 0, 0},   {-1, -1, 0, 0},
    {0, 0, -1, 0},  {-1, 0, -1, 0},  {0, -1, -1, 0},  {-1, -1, -1, 0},
    {0, 0, 0, -1},  {-1, 0, 0, -1},  {0, -1, 0, -1},  {-1, -1, 0, -1},
    {0, 0, -1, -1}, {-1, 0, -1, -1}, {0, -1, -1, -1}, {-1, -1, -1, -1},
};

void transfer_avx2(std::span<const std::int32_t> s, std::span<const double> theta, double tau,
                   std::span<std::int8_t> out) {
  assert(s.size() == out.size() && theta.size() == out.size());
  const std::size_t n = out.size();
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d vzero = _mm256_setzero_pd();
  const __m128i ones = _mm_set1_epi32(1);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vs = _mm_loadu_si128(reinterpret_cast<const __m128i*>(s.data() + i));
    const __m256d mag = _mm256_cvtepi32_pd(_mm_abs_epi32(vs));
    const __m256d v = _mm256_sub_pd(_mm256_add_pd(mag, _mm256_loadu_pd(theta.data() + i)), vtau);
    const int fire = _mm256_movemask_pd(_mm256_cmp_pd(v, vzero, _CMP_GE_OQ));
    const __m128i mask = _mm_load_si128(reinterpret_cast<const __m128i*>(kLaneMasks[fire]));
    store_spins4(out.data() + i, _mm_and_si128(_mm_sign_epi32(ones, vs), mask));
  }
  for (; i < n; ++i) out[i] = transfer_lane(s[i], theta[i], tau);
}

ErrorTally tally_avx2(std::span<const std::int8_t> expected, std::span<const std::int8_t> actual) {
  assert(expected.size() == actual.size());
  const std::size_t n = expected.size();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i all = _mm256_set1_epi8(-1);
  ErrorTally t;

  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i e = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(expected.data() + i));
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(actual.data() + i));
    const __m256i e0 = _mm256_cmpeq_epi8(e, zero);
    const __m256i a0 = _mm256_cmpeq_epi8(a, zero);
    const __m256i same = _mm256_cmpeq_epi8(e, a);
    const auto count = [](__m256i m) {
      return static_cast<std::int64_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_epi8(m))));
    };
    t.zero_to_nonzero += count(_mm256_andnot_si256(a0, e0));
    t.erased += count(_mm256_andnot_si256(e0, a0));
    t.sign_flipped += count(_mm256_andnot_si256(_mm256_or_si256(_mm256_or_si256(e0, a0), same), all));
  }
  for (; i < n; ++i) {
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

constexpr KernelTable kAvx2{"avx2", theta_avx2, transfer_avx2, tally_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table_impl() noexcept { return &kAvx2; }
}  // namespace detail

}  // namespace beg::kernels
