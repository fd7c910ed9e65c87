#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"

#include "adiclab/experiments.hpp"

using namespace adiclab;

namespace {

constexpr long double kLog32 = 0.63092975357145743710L;
const PointSpec kZero{{}, {0}};

DigitSystem cantor() { return DigitSystem::from_forbidden_words(3, {{1}}, "cantor"); }
DigitSystem golden() { return DigitSystem::from_forbidden_words(2, {{1, 1}}, "golden"); }

const AffineResult& find(const std::vector<AffineResult>& rs, Ratio r, long double t) {
  for (const auto& x : rs) {
    if (x.r.num == r.num && x.r.den == r.den && std::fabs(x.t - t) < 1e-12L) return x;
  }
  throw std::logic_error("grid point not found");
}

}  // namespace

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(Verdict::pass)) == "pass");
  CHECK(std::string(to_string(Verdict::fail)) == "fail");
  CHECK(std::string(to_string(Verdict::inconclusive)) == "inconclusive");
}

TEST_CASE("transform law examples") {
  const auto s = cantor();
  const auto p = LocalDiffParams::defaults(3);
  auto rep = verify_transform_law(s, SmoothMap::identity(), kZero, p, 0.02L);
  CHECK(rep.distance == 0);
  CHECK(rep.verdict == Verdict::pass);

  rep = verify_transform_law(s, SmoothMap::affine(2, 0.1L), kZero, p, 0.02L);
  CHECK(rep.distance <= 0.02L);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(std::fabs(rep.shift_predicted - (1 - kLog32)) < 1e-15L);
  CHECK(rep.depth == 12);
  CHECK(rep.resolution == 65536);

  rep = verify_transform_law(s, SmoothMap::affine(1.0L / 3, 0), kZero, p, 0.02L);
  CHECK(circular_distance(rep.shift_predicted, 0) < 1e-15L);
  CHECK(rep.distance <= 0.02L);
}

TEST_CASE("transform law for the affine family at 0") {
  const auto s = cantor();
  const auto p = LocalDiffParams::defaults(3);
  for (long double r : {2.0L, 0.5L, 1.5L}) {
    const auto rep = verify_transform_law(s, SmoothMap::affine(r, 0), kZero, p, 0.02L);
    CHECK(circular_distance(rep.shift_predicted, wrap01(-std::log(r) / std::log(3.0L))) < 1e-15L);
    CHECK(rep.distance <= 0.02L);
  }
}

TEST_CASE("transform law for a curved map") {
  const auto s = cantor();
  const auto f = SmoothMap::polynomial({0, 2, -1});
  for (const PointSpec& x : {kZero, PointSpec{{2}, {0}}, PointSpec{{0, 2}, {0, 2}}}) {
    CHECK(verify_transform_law(s, f, x, LocalDiffParams::defaults(3), 0.02L).verdict == Verdict::pass);
  }
}

TEST_CASE("transform law edge cases") {
  const auto p = LocalDiffParams::defaults(2);
  const auto fixed = DigitSystem::from_forbidden_words(2, {{1}});
  const auto rep = verify_transform_law(fixed, SmoothMap::affine(0.5L, 0.1L), kZero, p, 0.02L);
  CHECK(rep.verdict == Verdict::inconclusive);
  CHECK(rep.distance == 1);
  CHECK_THROWS_AS(verify_transform_law(cantor(), SmoothMap::identity(), PointSpec{{1}, {0}},
                                       LocalDiffParams::defaults(3), 0.02L),
                  std::domain_error);
}

TEST_CASE("circle_box_dimension") {
  CHECK(circle_box_dimension(CircleSet::full(1 << 14)).slope == doctest::Approx(1));
  CircleSet one(1 << 14);
  one.set(77);
  CHECK(circle_box_dimension(one).slope == doctest::Approx(0).epsilon(1e-12));
  CircleSet sparse(1 << 14);
  for (std::uint64_t i = 0; i < (1 << 14); i += 8) sparse.set(i);
  CHECK(circle_box_dimension(sparse).slope == doctest::Approx(1));
  CircleSet coarse(1 << 14);
  for (std::uint64_t i = 0; i < (1 << 14); i += 64) coarse.set(i);
  CHECK(circle_box_dimension(coarse).slope < 1);
}

TEST_CASE("full-circle claim preconditions") {
  CHECK_THROWS_AS(claim_full_circle(cantor(), 9, {8, 9, 10}, 1 << 14), std::invalid_argument);
  CHECK_THROWS_AS(claim_full_circle(DigitSystem::from_forbidden_words(2, {}), 4, {8, 9, 10}, 1 << 14),
                  std::invalid_argument);
  const auto orbit = DigitSystem::from_automaton(2, 2, {0}, {{0, 0, 1}, {1, 1, 0}});
  const auto rep = claim_full_circle(orbit, 3, {8, 9, 10}, 1 << 14);
  CHECK(rep.vacuous);
  CHECK(rep.rows.empty());
}

TEST_CASE("full-circle claim on the full shift") {
  const auto rep = claim_full_circle(DigitSystem::from_forbidden_words(2, {}), 3, {8}, 65536);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].gap == 0);
  CHECK(rep.rows[0].cumulative_gap == 0);
}

TEST_CASE("full-circle claim trend on the golden mean shift") {
  const auto rep = claim_full_circle(golden(), 3, {8, 10, 12}, 1 << 14);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.non_increasing);
  CHECK(rep.mechanism_ok);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].cumulative_gap <= rep.rows[i - 1].cumulative_gap);
  CHECK(rep.x0.has_value());
}

TEST_CASE("map dimension inequality") {
  const auto s = cantor();
  auto rep = check_map_dim_inequality(s, SmoothMap::identity(), 2, {8, 9, 10}, 65536);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(std::fabs(rep.dim_fx - rep.dim_fy) <= 0.05L);
  CHECK(std::fabs(rep.bdim_x - kLog32) < 1e-12L);

  rep = check_map_dim_inequality(s, SmoothMap::affine(2, 0), 2, {8, 9, 10}, 65536);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.dim_fy >= rep.dim_fx - rep.bdim_x);

  const auto shifted_square = SmoothMap::polynomial({1.0L / 9, 2.0L / 9, 1.0L / 9});
  rep = check_map_dim_inequality(s, shifted_square, 2, {8, 9, 10, 11, 12}, 65536);
  CHECK(rep.rows.size() == 5);
  CHECK(rep.holds);
  CHECK(rep.verdict == Verdict::pass);

  rep = check_map_dim_inequality(s, SmoothMap::identity(), 2, {8, 9}, 65536);
  CHECK(rep.verdict == Verdict::inconclusive);
}

TEST_CASE("rational_grid") {
  const auto g = rational_grid(3, 1);
  const std::vector<long double> expected = {-1, -2.0L / 3, -0.5L, -1.0L / 3, 1.0L / 3, 0.5L, 2.0L / 3, 1};
  REQUIRE(g.size() == expected.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(static_cast<long double>(g[i].num) / g[i].den == doctest::Approx(expected[i]));
    CHECK(std::gcd(g[i].num, g[i].den) == 1);
  }
  const auto big = rational_grid(9, 3);
  for (std::size_t i = 1; i < big.size(); ++i) {
    CHECK(static_cast<long double>(big[i - 1].num) / big[i - 1].den <
          static_cast<long double>(big[i].num) / big[i].den);
  }
}

TEST_CASE("affine embedding search examples") {
  const auto s = cantor();
  const std::vector<Ratio> rs = {{1, 3}, {1, 2}, {2, 3}, {1, 1}, {-1, 1}, {1, 9}};
  const std::vector<long double> ts = {0, 2.0L / 9, 2.0L / 3, 1};
  const auto out = affine_embedding_search(s, rs, ts, 8);
  CHECK(out.size() == rs.size() * ts.size());
  CHECK(out[0].r.num == 1);
  CHECK(out[1].t == doctest::Approx(2.0 / 9));

  const auto& third = find(out, {1, 3}, 0);
  CHECK(third.passes);
  CHECK(third.exact);
  CHECK(third.commensurable);
  CHECK(third.log_ratio.num == -1);
  CHECK(third.log_ratio.den == 1);
  CHECK(find(out, {1, 3}, 2.0L / 3).passes);
  CHECK(find(out, {1, 9}, 2.0L / 9).passes);
  CHECK(find(out, {1, 1}, 0).passes);
  CHECK(find(out, {-1, 1}, 1).passes);

  const auto& half = find(out, {1, 2}, 0);
  CHECK_FALSE(half.passes);
  CHECK(half.refuted_at >= 1);
  CHECK(half.refuted_at <= 3);
  CHECK_FALSE(half.commensurable);
  CHECK_FALSE(find(out, {2, 3}, 0).passes);
  for (const auto& r : out) {
    if (r.passes) CHECK(r.commensurable);
  }
}

TEST_CASE("inclusion of b^-t in the difference set") {
  auto rep = check_inclusion_prop(cantor(), 2, LocalDiffParams::defaults(3), 10);
  CHECK(rep.checked > 0);
  CHECK(rep.violations == 0);
  auto p = LocalDiffParams::defaults(2);
  p.phase_base = 3;
  rep = check_inclusion_prop(golden(), 3, p, 12, 6);
  CHECK(rep.checked > 0);
  CHECK(rep.violations == 0);
}
