// Acceptance checks: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "adiclab/adic.hpp"
#include "adiclab/experiments.hpp"
#include "adiclab/local_diff.hpp"
#include "adiclab/measures.hpp"

using namespace adiclab;

namespace {

// mpmath, 40 significant digits.
constexpr long double kLog32 = 0.63092975357145743710L;
constexpr long double kGolden = 0.69424191363061730174L;
constexpr long double kT[] = {0.36907024642854256290L, 0.10721073928562768870L, 0.034352726955749869521L,
                              0.011307464996243084405L};

std::string data(const std::string& name) { return std::string(ADICLAB_DATA_DIR) + "/" + name; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %d %s: %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs,
              budget_s, in_time ? "" : " over time");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome exact_dimension() {
  const auto cantor = load_system(data("cantor3.set"));
  const auto golden = load_system(data("golden2.set"));
  const long double phi = (1 + std::sqrt(5.0L)) / 2;
  const long double closed = std::log(phi) / std::log(2.0L);
  const long double dc = entropy_exact(cantor).dim;
  const long double dg = entropy_exact(golden).dim;
  const long double ec = std::fabs(dc - kLog32);
  const long double eg = std::max(std::fabs(dg - closed), std::fabs(dg - kGolden));
  return {ec <= 1e-10L && eg <= 1e-10L, fmt("cantor %.15Lf (err %.1Le), golden %.15Lf (err %.1Le)", dc, ec, dg, eg)};
}

Outcome box_count() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"cantor3.set", "golden2.set", "full2.set"}) {
    const auto sys = load_system(data(name));
    std::map<int, long double> counts;
    for (int n = 4; n <= 12; ++n) counts[n] = static_cast<long double>(cover_at_depth(sys, n).intervals.size());
    const long double slope = box_count_estimate(counts, sys.base()).slope;
    const long double dim = entropy_exact(sys).dim;
    ok = ok && std::fabs(slope - dim) <= 0.01L;
    detail += fmt("%s%s slope %.5Lf vs %.5Lf", detail.empty() ? "" : ", ", name, slope, dim);
  }
  return {ok, detail};
}

Outcome closed_form_oracle() {
  const auto sys = load_system(data("zero_powers3.set"));
  const auto F = local_difference_set(sys, PointSpec{{}, {0}}, LocalDiffParams::defaults(3));
  std::vector<long double> analytic = {0};
  for (int d = 1; d <= 60; ++d) analytic.push_back(wrap01(-std::log1p(-std::pow(3.0L, -d)) / std::log(3.0L)));
  long double worst = 0;
  for (auto c : F.cells()) {
    long double best = 1;
    for (long double t : analytic) best = std::min(best, circular_distance(F.cell_midpoint(c), t));
    worst = std::max(worst, best);
  }
  int covered = 0;
  for (long double t : kT) covered += F.test(F.cell_of(t)) ? 1 : 0;
  return {!F.empty() && worst <= 0.01L && covered == 4,
          fmt("%llu cells, worst distance to analytic set %.5Lf, %d/4 of t_1..t_4 covered",
              static_cast<unsigned long long>(F.count()), worst, covered)};
}

Outcome transformation_law() {
  const auto cantor = load_system(data("cantor3.set"));
  const auto f = load_map(data("affine_2x.map"));
  const auto p = LocalDiffParams::defaults(3);
  const auto cover = cover_at_depth(cantor, p.depth);
  // Literal form: circle convention on both sides, image windows carried by f.
  auto q = p;
  q.scale = 2;
  const auto observed = local_difference_set(image_cover(cover, f), f.eval(0).value, q);
  const auto base = local_difference_set(cover, 0, p);
  const long double literal = hausdorff_distance(observed, base.rotate(kLog32));
  const auto rep = verify_transform_law(cantor, f, PointSpec{{}, {0}}, p, 0.02L);
  return {literal <= 0.02L && rep.verdict == Verdict::pass,
          fmt("d(F^(fX), rotate(F^, +log3 2)) = %.5Lf; library verdict %s at shift %.5Lf, distance %.5Lf", literal,
              to_string(rep.verdict), rep.shift_predicted, rep.distance)};
}

Outcome full_circle_trend() {
  const auto cantor = load_system(data("cantor3.set"));
  const auto rep = claim_full_circle(cantor, 2, {8, 10, 12, 14}, 65536);
  std::string rows;
  bool per_depth_monotone = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    rows += fmt("%s%d: %.5Lf/%.5Lf", i ? ", " : "", r.depth, r.gap, r.cumulative_gap);
    if (i > 0 && r.gap > rep.rows[i - 1].gap) per_depth_monotone = false;
  }
  const auto& last = rep.rows.back();
  const bool ok = rep.non_increasing && last.cumulative_gap <= 0.05L && last.gap <= 0.05L && rep.mechanism_ok;
  return {ok, fmt("gap per depth/cumulative {%s}; cumulative non-increasing %s, per-depth non-increasing %s, "
                  "mechanism %s",
                  rows.c_str(), rep.non_increasing ? "yes" : "no", per_depth_monotone ? "yes" : "no",
                  rep.mechanism_ok ? "ok" : "broken")};
}

Outcome inclusion() {
  const auto cantor = load_system(data("cantor3.set"));
  const auto rep = check_inclusion_prop(cantor, 2, LocalDiffParams::defaults(3), 12, 6);
  return {rep.checked > 0 && rep.violations == 0,
          fmt("%llu marked cells checked, %llu violations", static_cast<unsigned long long>(rep.checked),
              static_cast<unsigned long long>(rep.violations))};
}

Outcome affine_pattern() {
  const auto cantor = load_system(data("cantor3.set"));
  const auto rs = rational_grid(9, 3);
  std::vector<long double> ts;
  for (int k = 0; k < 729; ++k) ts.push_back(k / 729.0L);
  const auto out = affine_embedding_search(cantor, rs, ts, 10);
  std::size_t survivors = 0;
  bool all_commensurable = true, third0 = false, third23 = false, refuted = true;
  int worst_refutation = 0;
  for (const auto& r : out) {
    const bool third = r.r.num == 1 && r.r.den == 3;
    if (r.passes) {
      ++survivors;
      all_commensurable = all_commensurable && r.commensurable;
      if (third && std::fabs(r.t) < 1e-12L) third0 = true;
      if (third && std::fabs(r.t - 2.0L / 3) < 1e-12L) third23 = true;
    }
    if (r.r.num > 0 && ((r.r.num == 1 && r.r.den == 2) || (r.r.num == 2 && r.r.den == 3))) {
      refuted = refuted && !r.passes && r.refuted_at >= 1 && r.refuted_at <= 4;
      worst_refutation = std::max(worst_refutation, r.refuted_at);
    }
  }
  return {survivors > 0 && all_commensurable && third0 && third23 && refuted,
          fmt("%zu pairs, %zu survivors, all commensurable %s, (1/3, 0) %s, (1/3, 2/3) %s, r = 1/2 and 2/3 "
              "refuted by depth %d",
              out.size(), survivors, all_commensurable ? "yes" : "no", third0 ? "survives" : "refuted",
              third23 ? "survives" : "refuted", worst_refutation)};
}

Outcome measures_sanity() {
  bool ok = true;
  std::string detail;
  const struct {
    const char* file;
    const char* weights;
  } shipped[] = {{"full2.set", "uniform"}, {"cantor3.set", "uniform"}, {"golden2.set", "parry"}};
  for (const auto& m : shipped) {
    const auto mu = markov_from_system(load_system(data(m.file)), m.weights);
    const auto est = entropy_at_scale(sample_measure(mu, 1'000'000, 1), 8, mu.base);
    const long double err = std::fabs(est.dimension - mu.dimension);
    ok = ok && err <= 0.02L;
    detail += fmt("%s %.4Lf vs %.4Lf, ", m.file, est.dimension, mu.dimension);
  }
  const auto leb = markov_from_system(load_system(data("full2.set")));
  const auto avg = cesaro_pushforward_samples(leb, SmoothMap::identity(), 12, 1'000'000, 2);
  const long double d_leb = entropy_at_scale(avg, 8, 2).dimension;
  ok = ok && std::fabs(d_leb - 1) <= 0.02L;
  const auto proxy = curved_proxy_experiment(markov_from_system(load_system(data("cantor3.set"))),
                                      load_map(data("curved.map")), CurvedProxyParams{});
  ok = ok && proxy.margin > 0;
  detail += fmt("Lebesgue Cesaro %.4Lf, curved-map proxy margin %.4Lf", d_leb, proxy.margin);
  return {ok, detail};
}

Outcome determinism() {
  const std::vector<std::string> commands = {
      "full-circle --set " + data("cantor3.set") + " --b 2 --depths 8..11",
      "measure-dim --set " + data("golden2.set") + " --weights parry --samples 300000 --depth 8 --seed 17",
      "measure-dim --set " + data("cantor3.set") + " --map " + data("curved.map") + " --samples 300000 --seed 5",
      "affine-search --set " + data("cantor3.set") + " --depth 8 --max-den 6 --translations 81",
      "prop-dim --set " + data("cantor3.set") + " --map " + data("curved.map") + " --b 2 --depths 8..10",
      "localdiff --set " + data("golden2.set") + " --depth 12",
      "transform-law --set " + data("cantor3.set") + " --map " + data("affine_2x.map") + " --point '(0)'",
  };
  const auto dir = std::filesystem::temp_directory_path() / "adiclab_acceptance";
  std::filesystem::create_directories(dir);
  std::size_t identical = 0;
  std::string mismatched;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::vector<std::string> reports;
    for (const char* jobs : {"1", "4", "1"}) {
      const auto out = dir / ("report_" + std::to_string(i) + "_" + std::to_string(reports.size()) + ".json");
      const std::string cmd = std::string(ADICLAB_CLI) + " " + commands[i] + " --jobs " + jobs + " --out " +
                              out.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      reports.push_back(WIFEXITED(status) && WEXITSTATUS(status) <= 1 ? slurp(out) : std::string{});
    }
    if (!reports[0].empty() && reports[0] == reports[1] && reports[0] == reports[2]) {
      ++identical;
    } else {
      mismatched += " " + commands[i].substr(0, commands[i].find(' '));
    }
  }
  std::filesystem::remove_all(dir);
  return {identical == commands.size(),
          fmt("%zu/%zu commands byte-identical across --jobs 1, 4, 1%s", identical, commands.size(),
              mismatched.empty() ? "" : (";" + mismatched + " differ").c_str())};
}

}  // namespace

int main() {
  criterion(1, "exact dimension", 1, exact_dimension);
  criterion(2, "box-count agreement", 10, box_count);
  criterion(3, "local difference set closed-form oracle", 30, closed_form_oracle);
  criterion(4, "transformation law", 60, transformation_law);
  criterion(5, "full-circle trend", 120, full_circle_trend);
  criterion(6, "difference set inclusion", 60, inclusion);
  criterion(7, "affine self-embedding pattern", 120, affine_pattern);
  criterion(8, "measures sanity", 180, measures_sanity);
  criterion(9, "determinism", 600, determinism);
  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
