#include <doctest.h>

#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "beg/kernels.hpp"

using namespace beg::kernels;

namespace {

struct Inputs {
  std::vector<std::int32_t> cover, degree, s;
  std::vector<std::int8_t> probe, expected, actual;
  std::vector<double> theta;
  ThetaTerms terms;
  double tau;
};

Inputs random_inputs(std::mt19937_64& rng, std::size_t n) {
  Inputs in;
  std::uniform_int_distribution<std::int32_t> small(-40, 40);
  std::uniform_int_distribution<std::int32_t> count(0, 500);
  std::uniform_int_distribution<int> spin(-1, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    in.cover.push_back(count(rng));
    in.degree.push_back(count(rng));
    in.s.push_back(small(rng));
    in.probe.push_back(static_cast<std::int8_t>(spin(rng)));
    in.expected.push_back(static_cast<std::int8_t>(spin(rng)));
    in.actual.push_back(unit(rng) < 0.7 ? in.expected.back() : static_cast<std::int8_t>(spin(rng)));
    in.theta.push_back(40.0 * (unit(rng) - 0.5));
  }
  const double p = 0.2 * unit(rng) + 1e-3;
  in.terms = {p, std::floor(30.0 * unit(rng)), std::floor(1e4 * unit(rng)), std::floor(1e5 * unit(rng)) + 1.0,
              1.0 / ((1.0 - p) * (1.0 - p))};
  in.tau = 20.0 * unit(rng);
  return in;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("transfer lane follows sgn * Heaviside with closed boundary") {
  CHECK(transfer_lane(1, 1.0, std::log(3.0)) == 1);
  CHECK(transfer_lane(0, 5.0, 0.0) == 0);
  CHECK(transfer_lane(2, 0.0, 2.0) == 1);
  CHECK(transfer_lane(-3, 0.5, 4.0) == 0);
  CHECK(transfer_lane(-3, 1.0, 4.0) == -1);
}

TEST_CASE("scalar table is always available and selectable") {
  CHECK(scalar_table().name == "scalar");
  CHECK(select_backend(Backend::scalar));
  CHECK(&active_table() == &scalar_table());
  CHECK(select_backend(Backend::automatic));
}

TEST_CASE("AVX2 kernels are bitwise identical to the scalar reference") {
  const KernelTable* simd = avx2_table();
  if (simd == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this build/CPU; equivalence not exercised");
    return;
  }
  const KernelTable& ref = scalar_table();
  std::mt19937_64 rng(99);
  // Sizes cover empty input, pure tails and every tail length after full vectors.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 31u, 32u, 33u, 67u, 1000u, 4099u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto in = random_inputs(rng, n);

      std::vector<double> ta(n), tb(n);
      ref.theta(in.cover, in.degree, in.probe, in.terms, ta);
      simd->theta(in.cover, in.degree, in.probe, in.terms, tb);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(ta[i], tb[i]));

      std::vector<std::int8_t> oa(n), ob(n);
      ref.transfer(in.s, in.theta, in.tau, oa);
      simd->transfer(in.s, in.theta, in.tau, ob);
      REQUIRE(oa == ob);

      REQUIRE(ref.tally(in.expected, in.actual) == simd->tally(in.expected, in.actual));
    }
  }
}

TEST_CASE("AVX2 transfer agrees on exact threshold ties") {
  const KernelTable* simd = avx2_table();
  if (simd == nullptr) return;
  // |s| + theta - tau == 0 exactly must fire (Theta(0) = 1).
  std::vector<std::int32_t> s{2, -2, 0, 3, -5, 7, 1, -1};
  std::vector<double> theta{0.0, 0.0, 2.0, -1.0, 0.5, -7.0, 0.25, std::numeric_limits<double>::quiet_NaN()};
  std::vector<std::int8_t> a(s.size()), b(s.size());
  scalar_table().transfer(s, theta, 2.0, a);
  simd->transfer(s, theta, 2.0, b);
  CHECK(a == std::vector<std::int8_t>{1, -1, 0, 1, -1, 0, 0, 0});
  CHECK(a == b);
}

TEST_CASE("tally classifies each disagreement once") {
  const std::vector<std::int8_t> expected{0, 0, 1, 1, -1, -1, 0, 1};
  const std::vector<std::int8_t> actual{0, 1, 0, -1, -1, 1, -1, 1};
  const auto t = scalar_table().tally(expected, actual);
  CHECK(t.zero_to_nonzero == 2);
  CHECK(t.erased == 1);
  CHECK(t.sign_flipped == 2);
}
