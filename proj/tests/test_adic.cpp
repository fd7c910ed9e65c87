#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "doctest.h"

#include "adiclab/adic.hpp"

using namespace adiclab;

namespace {
constexpr long double kAdic62 = 0.41503749927884381855L;
constexpr long double kLog32 = 0.63092975357145743710L;
constexpr long double kGapLog32N5 = 0.26185950714291487420L;
}  // namespace

TEST_CASE("adic_frac examples") {
  CHECK(circular_distance(adic_frac(std::pow(3.0L, -2.5L), 3).value, 0.5L) < 1e-12L);
  CHECK(circular_distance(adic_frac(-1.0L / 9, 3).value, 0.0L) < 1e-12L);
  CHECK(std::fabs(adic_frac(6, 2).value - kAdic62) < 1e-15L);
  CHECK(adic_frac(6, 2).base == 2);
}

TEST_CASE("adic_frac errors") {
  CHECK_THROWS_AS(adic_frac(0, 3), std::domain_error);
  CHECK_THROWS_AS(adic_frac(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(adic_frac(1, 0), std::invalid_argument);
}

TEST_CASE("adic_frac is invariant under powers of the base") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int a : {2, 3, 5, 10}) {
    for (int i = 0; i < 200; ++i) {
      const long double s = std::pow(10.0L, static_cast<long double>(u(rng)));
      const long double v = adic_frac(s, a).value;
      CHECK(v >= 0);
      CHECK(v < 1);
      for (int k : {-4, -1, 1, 3}) {
        const long double w = adic_frac(std::pow(static_cast<long double>(a), k) * s, a).value;
        CHECK(circular_distance(v, w) < 1e-12L);
      }
    }
  }
}

TEST_CASE("adic_frac scaling law") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 500; ++i) {
    const long double s = std::pow(10.0L, static_cast<long double>(u(rng)));
    const long double c = (i % 2 ? -1 : 1) * std::pow(10.0L, static_cast<long double>(u(rng)));
    const long double lhs = adic_frac(c * s, 3).value;
    const long double rhs = wrap01(adic_frac(s, 3).value - std::log(std::fabs(c)) / std::log(3.0L));
    CHECK(circular_distance(lhs, rhs) < 1e-12L);
  }
}

TEST_CASE("adic_phase agrees with adic_frac on integer bases") {
  for (long double s : {0.3L, 7.0L, 1e-5L, -2.5L}) {
    CHECK(circular_distance(adic_phase(s, 3), adic_frac(s, 3).value) < 1e-15L);
  }
}

TEST_CASE("wrap01 and circular_distance") {
  CHECK(wrap01(-0.25L) == doctest::Approx(0.75));
  CHECK(wrap01(3.5L) == doctest::Approx(0.5));
  CHECK(wrap01(1.0L) == 0);
  CHECK(circular_distance(0.05L, 0.95L) == doctest::Approx(0.1));
  CHECK(circular_distance(0.2L, 0.7L) == doctest::Approx(0.5));
}

TEST_CASE("commensurability examples") {
  auto v = commensurability(2, 8);
  CHECK(v.related);
  CHECK(v.ratio.num == 1);
  CHECK(v.ratio.den == 3);
  v = commensurability(4, 8);
  CHECK(v.related);
  CHECK(v.ratio.num == 2);
  CHECK(v.ratio.den == 3);
  CHECK_FALSE(commensurability(2, 3).related);
  CHECK_FALSE(commensurability(6, 12).related);
  CHECK(commensurability(36, 216).related);
}

TEST_CASE("commensurability is reflexive, symmetric and holds for powers") {
  for (std::uint64_t a = 2; a <= 30; ++a) {
    const auto self = commensurability(a, a);
    CHECK(self.related);
    CHECK(self.ratio.num == 1);
    CHECK(self.ratio.den == 1);
    for (std::uint64_t b = 2; b <= 30; ++b) {
      const auto ab = commensurability(a, b);
      const auto ba = commensurability(b, a);
      CHECK(ab.related == ba.related);
      if (ab.related) {
        CHECK(ab.ratio.num == ba.ratio.den);
        CHECK(ab.ratio.den == ba.ratio.num);
      }
    }
    std::uint64_t p = a;
    for (int k = 1; p <= (std::uint64_t{1} << 40); ++k, p *= a) {
      const auto v = commensurability(a, p);
      CHECK(v.related);
      CHECK(v.ratio.num == 1);
      CHECK(v.ratio.den == k);
    }
  }
}

TEST_CASE("commensurability_rational") {
  auto v = commensurability_rational(1, 3, 3);
  CHECK(v.related);
  CHECK(v.ratio.num == -1);
  CHECK(v.ratio.den == 1);
  v = commensurability_rational(1, 1, 3);
  CHECK(v.related);
  CHECK(v.ratio.num == 0);
  v = commensurability_rational(9, 1, 27);
  CHECK(v.related);
  CHECK(v.ratio.num == 2);
  CHECK(v.ratio.den == 3);
  CHECK_FALSE(commensurability_rational(1, 2, 3).related);
  CHECK_FALSE(commensurability_rational(2, 3, 3).related);
}

TEST_CASE("factorize") {
  const auto f = factorize(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<std::uint64_t, int>{2, 3});
  CHECK(f[1] == std::pair<std::uint64_t, int>{3, 2});
  CHECK(f[2] == std::pair<std::uint64_t, int>{5, 1});
  CHECK(factorize(97).size() == 1);
}

TEST_CASE("rotation_orbit_gap examples") {
  CHECK(rotation_orbit_gap(1.0L / 3, 3) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(rotation_orbit_gap(kLog32, 1) == 1);
  CHECK(std::fabs(rotation_orbit_gap(kLog32, 5) - kGapLog32N5) < 1e-15L);
  CHECK_THROWS_AS(rotation_orbit_gap(kLog32, 0), std::invalid_argument);
}

TEST_CASE("rotation_orbit_gap is non-increasing in N and tends to zero") {
  long double prev = 2;
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    const long double g = rotation_orbit_gap(kLog32, n);
    CHECK(g <= prev + 1e-15L);
    prev = g;
  }
  CHECK(rotation_orbit_gap(kLog32, 100000) < 1e-3L);
}

TEST_CASE("three-distance theorem") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> n(1, 10000);
  for (int trial = 0; trial < 60; ++trial) {
    const long double alpha = u(rng);
    const auto gaps = rotation_orbit_gaps(alpha, static_cast<std::uint64_t>(n(rng)));
    std::set<long double> distinct;
    for (long double g : gaps) {
      bool seen = false;
      for (long double d : distinct) seen = seen || std::fabs(d - g) < 1e-12L;
      if (!seen) distinct.insert(g);
    }
    CHECK(distinct.size() <= 3);
  }
}
