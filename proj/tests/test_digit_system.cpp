#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "doctest.h"

#include "adiclab/digit_system.hpp"
#include "adiclab/errors.hpp"

using namespace adiclab;

namespace {

constexpr long double kLog32 = 0.63092975357145743710L;
constexpr long double kGolden = 0.69424191363061730174L;

const char* const kCantor = R"({"base": 3, "mode": "forbidden_words", "words": ["1"]})";
const char* const kGoldenDoc = R"({"base": 2, "mode": "forbidden_words", "words": ["11"]})";
const char* const kFull = R"({"base": 2, "mode": "forbidden_words", "words": []})";

std::string data(const std::string& name) { return std::string(ADICLAB_DATA_DIR) + "/" + name; }

std::vector<DigitSystem> shipped() {
  std::vector<DigitSystem> out;
  for (const char* f : {"cantor3.set", "golden2.set", "full2.set", "fixed0.set", "zero_powers3.set"}) {
    out.push_back(load_system(data(f)));
  }
  return out;
}

}  // namespace

TEST_CASE("parse_system examples") {
  const auto cantor = parse_system(kCantor);
  CHECK(cantor.base() == 3);
  CHECK(cantor.num_states() == 1);
  CHECK(cantor.out_degree(0) == 2);
  CHECK(cantor.next(0, 1) == -1);

  const auto golden = parse_system(kGoldenDoc);
  CHECK(golden.num_states() == 2);

  CHECK_THROWS_AS(parse_system(R"({"base": 2, "mode": "forbidden_words", "words": ["0", "1"]})"), EmptySetError);
}

TEST_CASE("parse_system rejects malformed documents") {
  CHECK_THROWS_AS(parse_system(R"({"base": 3, "mode": "forbidden_words", "words": ["3"]})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"base": 2, "mode": "automaton", "states": 1, "edges": [[0, 2, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"base": 2, "mode": "automaton", "states": 1, "edges": [[0, 0, 4]]})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"mode": "forbidden_words", "words": []})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"base": 2, "mode": "other"})"), ParseError);
  CHECK_THROWS_AS(parse_system(R"({"base": 2, "mode": "automaton", "states": 2, "edges": [[0, 0, 1]]})"),
                  EmptySetError);
  try {
    parse_system("{\n  \"base\": 2,\n  \"mode\": ]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("load_system reads the shipped files") {
  for (const auto& s : shipped()) CHECK_FALSE(s.name().empty());
  CHECK_THROWS(load_system(data("missing.set")));
}

TEST_CASE("automaton input is determinized and pruned") {
  const auto nd = DigitSystem::from_automaton(2, 3, {0}, {{0, 0, 1}, {0, 0, 2}, {1, 1, 0}, {2, 0, 0}});
  const auto words = admissible_words(nd, 4);
  std::set<std::vector<int>> expected;
  for (auto w : std::vector<std::vector<int>>{{0, 1, 0, 1}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}}) expected.insert(w);
  CHECK(std::set<std::vector<int>>(words.begin(), words.end()) == expected);
}

TEST_CASE("cover_at_depth examples") {
  const auto cantor = parse_system(kCantor);
  const auto c = cover_at_depth(cantor, 2);
  CHECK(c.adic);
  CHECK(c.depth == 2);
  REQUIRE(c.intervals.size() == 4);
  const long double offsets[] = {0, 2.0L / 9, 2.0L / 3, 8.0L / 9};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::fabs(c.intervals[i].lo - offsets[i]) < 1e-15L);
    CHECK(std::fabs(c.intervals[i].length() - 1.0L / 9) < 1e-15L);
  }
  CHECK(cover_at_depth(parse_system(kFull), 3).intervals.size() == 8);
  CHECK(cover_at_depth(parse_system(kGoldenDoc), 3).intervals.size() == 5);
  CHECK_THROWS_AS(cover_at_depth(parse_system(kFull), 40), DepthTooLarge);
  CHECK_THROWS_AS(cover_at_depth(cantor, -1), std::invalid_argument);
}

TEST_CASE("cover count equals the word count") {
  for (const auto& s : shipped()) {
    const auto counts = word_counts(s, 10);
    for (int n = 0; n <= 10; ++n) {
      const auto c = cover_at_depth(s, n);
      CHECK(static_cast<long double>(c.intervals.size()) == counts[n]);
      CHECK(c.cells.size() == c.intervals.size());
      for (std::size_t i = 1; i < c.cells.size(); ++i) CHECK(c.cells[i - 1] < c.cells[i]);
    }
  }
}

TEST_CASE("solid cylinders") {
  CHECK(universal_states(parse_system(kFull)) == std::vector<bool>{true});
  CHECK(universal_states(parse_system(kCantor)) == std::vector<bool>{false});
  const auto c = cover_at_depth(parse_system(kFull), 4);
  for (auto s : c.solid) CHECK(s == 1);
  for (auto s : cover_at_depth(parse_system(kGoldenDoc), 4).solid) CHECK(s == 0);
}

TEST_CASE("cover refinement") {
  for (const auto& s : shipped()) {
    for (int n = 0; n < 9; ++n) {
      const auto coarse = cover_at_depth(s, n);
      const auto fine = cover_at_depth(s, n + 1);
      const std::set<std::uint64_t> parents(coarse.cells.begin(), coarse.cells.end());
      for (auto j : fine.cells) CHECK(parents.count(j / s.base()) == 1);
    }
  }
}

TEST_CASE("submultiplicativity of word counts") {
  for (const auto& s : shipped()) {
    const auto c = word_counts(s, 16);
    for (int n = 0; n <= 8; ++n) {
      for (int m = 0; m <= 8; ++m) CHECK(c[n + m] <= c[n] * c[m]);
    }
  }
}

TEST_CASE("T_a maps the depth-n cover into the depth-(n-1) cover") {
  for (const auto& s : shipped()) {
    for (int n = 1; n <= 9; ++n) {
      const auto fine = cover_at_depth(s, n);
      const auto coarse = cover_at_depth(s, n - 1);
      const std::set<std::uint64_t> target(coarse.cells.begin(), coarse.cells.end());
      const auto mod = static_cast<std::uint64_t>(std::llround(std::pow(s.base(), n - 1)));
      for (auto j : fine.cells) CHECK(target.count(j % mod) == 1);
    }
  }
}

TEST_CASE("entropy_exact examples") {
  const auto full3 = parse_system(R"({"base": 3, "mode": "forbidden_words", "words": []})");
  auto e = entropy_exact(full3);
  CHECK(std::fabs(e.h - std::log(3.0L)) < 1e-12L);
  CHECK(std::fabs(e.dim - 1) < 1e-12L);
  CHECK(std::fabs(entropy_exact(parse_system(kCantor)).dim - kLog32) < 1e-12L);
  const long double phi = (1 + std::sqrt(5.0L)) / 2;
  e = entropy_exact(parse_system(kGoldenDoc));
  CHECK(std::fabs(e.perron - phi) < 1e-12L);
  CHECK(std::fabs(e.dim - kGolden) < 1e-12L);
  CHECK(entropy_exact(load_system(data("fixed0.set"))).h == 0);
}

TEST_CASE("entropy_exact agrees with the growth of word counts") {
  for (const auto& s : shipped()) {
    const auto c = word_counts(s, 64);
    const long double h = entropy_exact(s).h;
    if (h > 0) {
      CHECK(std::fabs(std::log(c[16]) / 16 - h) < 0.01L);
    } else {
      // Polynomial growth: log(count)/n only tends to 0, it is not within 0.01 at n = 16.
      CHECK(std::log(c[64]) / 64 < std::log(c[16]) / 16 + 1e-12L);
      CHECK(std::log(c[64]) / 64 < 0.07L);
    }
  }
}

TEST_CASE("classify examples") {
  auto k = classify(load_system(data("fixed0.set")));
  CHECK(k.finite);
  CHECK_FALSE(k.perfect);
  k = classify(parse_system(kCantor));
  CHECK(k.transitive);
  CHECK(k.perfect);
  CHECK_FALSE(k.finite);
  k = classify(parse_system(kFull));
  CHECK(k.transitive);
  CHECK(k.perfect);
  k = classify(load_system(data("zero_powers3.set")));
  CHECK_FALSE(k.finite);
  CHECK_FALSE(k.perfect);
  CHECK_FALSE(k.transitive);
  const auto orbit = DigitSystem::from_automaton(2, 2, {0}, {{0, 0, 1}, {1, 1, 0}});
  k = classify(orbit);
  CHECK(k.finite);
  CHECK(k.transitive);
  CHECK_FALSE(k.perfect);
}

TEST_CASE("finite classification matches zero dimension and bounded counts") {
  for (const auto& s : shipped()) {
    const auto c = word_counts(s, 30);
    const bool bounded = c[30] == c[20];
    CHECK(classify(s).finite == (entropy_exact(s).dim == 0 && bounded));
  }
}

TEST_CASE("finite_points") {
  const auto orbit = DigitSystem::from_automaton(2, 2, {0}, {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}, {0, 1, 1}});
  CHECK_THROWS_AS(finite_points(orbit), std::domain_error);
  const auto two = DigitSystem::from_automaton(2, 2, {0, 1}, {{0, 0, 1}, {1, 1, 0}});
  auto pts = finite_points(two);
  REQUIRE(pts.size() == 2);
  CHECK(std::fabs(pts[0] - 1.0L / 3) < 1e-15L);
  CHECK(std::fabs(pts[1] - 2.0L / 3) < 1e-15L);
}

TEST_CASE("box_count_estimate examples") {
  std::map<int, long double> cantor, full;
  for (int n = 4; n <= 12; ++n) {
    cantor[n] = std::pow(2.0L, n);
    full[n] = std::pow(2.0L, n);
  }
  auto est = box_count_estimate(cantor, 3);
  CHECK(std::fabs(est.slope - kLog32) < 1e-12L);
  CHECK(est.residual < 1e-12L);
  CHECK(std::fabs(box_count_estimate(full, 2).slope - 1) < 1e-12L);

  const auto golden = parse_system(kGoldenDoc);
  const auto c = word_counts(golden, 14);
  std::map<int, long double> g;
  for (int n = 4; n <= 14; ++n) g[n] = c[n];
  CHECK(std::fabs(box_count_estimate(g, 2).slope - kGolden) < 0.01L);

  CHECK_THROWS_AS(box_count_estimate({{1, 2}, {2, 4}}, 2), std::invalid_argument);
}

TEST_CASE("points") {
  const auto cantor = parse_system(kCantor);
  const PointSpec two_thirds{{2}, {0}};
  CHECK(std::fabs(point_value(two_thirds, 3) - 2.0L / 3) < 1e-15L);
  CHECK(std::fabs(point_value(PointSpec{{}, {0, 2}}, 3) - 0.25L) < 1e-15L);
  CHECK(is_admissible(cantor, two_thirds));
  CHECK_FALSE(is_admissible(cantor, PointSpec{{1}, {0}}));
  const auto s = shift_point(two_thirds);
  CHECK(s.preperiod.empty());
  CHECK(s.period == std::vector<int>{0});
  const auto p = canonical_point(parse_system(kGoldenDoc), {1});
  CHECK(is_admissible(parse_system(kGoldenDoc), p));
  CHECK(point_value(p, 2) >= 0.5L);
}
