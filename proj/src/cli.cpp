#include "adiclab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "adiclab/errors.hpp"
#include "adiclab/experiments.hpp"
#include "adiclab/measures.hpp"
#include "adiclab/parallel.hpp"

namespace adiclab {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double num(long double v) { return static_cast<double>(v); }

std::string ratio_text(const Ratio& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

std::string fmt(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

// Marked runs as [first, last] cell pairs, ascending.
Json arcs(const CircleSet& s) {
  Json out = Json::array();
  std::int64_t lo = -1, prev = -2;
  for (auto c : s.cells()) {
    const auto ci = static_cast<std::int64_t>(c);
    if (ci != prev + 1) {
      if (lo >= 0) out.push_back({lo, prev});
      lo = ci;
    }
    prev = ci;
  }
  if (lo >= 0) out.push_back({lo, prev});
  return out;
}

Json circle_json(const CircleSet& s) {
  Json j;
  j["resolution"] = s.resolution();
  j["marked"] = s.count();
  j["max_gap"] = num(s.max_gap());
  j["arcs"] = arcs(s);
  return j;
}

Json params_json(const LocalDiffParams& p) {
  Json j;
  j["depth"] = p.depth;
  j["inner_scale"] = p.inner_scale;
  j["guard"] = p.guard;
  j["epsilon"] = num(p.epsilon);
  j["resolution"] = p.resolution;
  j["phase_base"] = num(p.phase_base);
  return j;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg) {}

  RunOutcome execute() {
    const auto t0 = std::chrono::steady_clock::now();
    check_caps();
    set_worker_count(cfg_.jobs);
    report_["tool"] = "adiclab";
    report_["version"] = kVersion;
    report_["command"] = cfg_.command;
    report_["inputs"] = inputs_json();
    report_["params"] = Json::object();
    report_["results"] = Json::object();
    dispatch();
    report_["status"] = status_ == kExitOk ? (verdict_.empty() ? "complete" : verdict_) : "fail";
    report_["exit_code"] = status_;
    if (cfg_.timing)
      report_["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    RunOutcome out;
    out.status = status_;
    out.report = report_.dump(2) + "\n";
    out.summary = summary_.str();
    return out;
  }

 private:
  const ExperimentConfig& cfg_;
  Json report_;
  std::ostringstream summary_;
  int status_ = kExitOk;
  std::string verdict_;

  Json& params() { return report_["params"]; }
  Json& results() { return report_["results"]; }

  void line(const std::string& key, const std::string& value) { summary_ << key << ": " << value << "\n"; }

  void fail_if(bool failed) {
    if (failed) status_ = kExitFailed;
  }

  Json inputs_json() const {
    Json j;
    if (!cfg_.set_path.empty()) j["set"] = cfg_.set_path;
    if (!cfg_.map_path.empty()) j["map"] = cfg_.map_path;
    if (!cfg_.point.empty()) j["point"] = cfg_.point;
    return j;
  }

  void check_caps() const {
    if (cfg_.depth) require(*cfg_.depth >= 1 && *cfg_.depth <= kMaxCliDepth, "depth must be in [1, 20]");
    if (cfg_.depths)
      require(cfg_.depths->first >= 1 && cfg_.depths->second <= kMaxCliDepth && cfg_.depths->first <= cfg_.depths->second,
              "depths must satisfy 1 <= lo <= hi <= 20");
    if (cfg_.resolution)
      require(*cfg_.resolution >= 2 && *cfg_.resolution <= kMaxResolution, "resolution must be in [2, 2^24]");
    require(cfg_.samples >= 1 && cfg_.samples <= kMaxSamples, "samples must be in [1, 1e8]");
    if (cfg_.b) require(*cfg_.b >= 2, "b must be >= 2");
  }

  DigitSystem system() const {
    require(!cfg_.set_path.empty(), cfg_.command + " needs --set");
    return load_system(cfg_.set_path);
  }

  SmoothMap map() const {
    require(!cfg_.map_path.empty(), cfg_.command + " needs --map");
    return load_map(cfg_.map_path);
  }

  int b_required() const {
    require(cfg_.b.has_value(), cfg_.command + " needs --b");
    return *cfg_.b;
  }

  std::vector<int> depth_list(int lo, int hi) const {
    const auto [l, h] = cfg_.depths.value_or(std::pair{lo, hi});
    std::vector<int> v;
    for (int d = l; d <= h; ++d) v.push_back(d);
    return v;
  }

  LocalDiffParams local_params(int base) const {
    LocalDiffParams p = LocalDiffParams::defaults(base);
    if (cfg_.depth || cfg_.resolution)
      p = LocalDiffParams::with_depth(base, cfg_.depth.value_or(p.depth), cfg_.resolution.value_or(p.resolution));
    if (cfg_.guard) {
      p.guard = *cfg_.guard;
      p.inner_scale = std::max(0, p.depth - p.guard - 3);
    }
    if (cfg_.epsilon) p.epsilon = *cfg_.epsilon;
    p.validate();
    return p;
  }

  PointSpec point_for(const DigitSystem& sys) const {
    if (!cfg_.point.empty()) return parse_point(cfg_.point, sys.base());
    const PointSpec zero{{}, {0}};
    if (is_admissible(sys, zero)) return zero;
    return net_points(sys, 1).front();
  }

  void dispatch() {
    const std::string& c = cfg_.command;
    if (c == "entropy") return entropy();
    if (c == "cover") return cover();
    if (c == "diffset") return diffset();
    if (c == "localdiff") return localdiff();
    if (c == "transform-law") return transform_law();
    if (c == "full-circle") return full_circle();
    if (c == "prop-dim") return prop_dim();
    if (c == "affine-search") return affine_search();
    if (c == "measure-dim") return measure_dim();
    if (c == "classify") return classify_cmd();
    throw UsageError("unknown command '" + c + "'");
  }

  void entropy() {
    const DigitSystem sys = system();
    const auto depths = depth_list(4, 12);
    params()["depths"] = {depths.front(), depths.back()};
    const EntropyResult e = entropy_exact(sys);
    const auto counts = word_counts(sys, depths.back());
    std::map<int, long double> used;
    for (int d : depths) used[d] = counts[static_cast<std::size_t>(d)];
    auto& r = results();
    r["base"] = sys.base();
    r["perron"] = num(e.perron);
    r["entropy"] = num(e.h);
    r["dimension"] = num(e.dim);
    Json bc;
    bc["depths"] = Json::array();
    bc["counts"] = Json::array();
    for (const auto& [d, n] : used) {
      bc["depths"].push_back(d);
      bc["counts"].push_back(num(n));
    }
    if (used.size() >= 3 && std::all_of(used.begin(), used.end(), [](const auto& kv) { return kv.second >= 1; })) {
      const DimensionEstimate est = box_count_estimate(used, sys.base());
      bc["slope"] = num(est.slope);
      bc["residual"] = num(est.residual);
      line("box-count slope", fmt(est.slope));
    }
    r["box_count"] = bc;
    line("dimension", fmt(e.dim));
  }

  void cover() {
    const DigitSystem sys = system();
    const int depth = cfg_.depth.value_or(8);
    params()["depth"] = depth;
    const Cover cv = cover_at_depth(sys, depth);
    auto& r = results();
    r["base"] = cv.base;
    r["depth"] = cv.depth;
    r["cylinders"] = cv.cells.size();
    r["cells"] = cv.cells;
    if (!cv.points.empty()) {
      r["points"] = Json::array();
      for (auto x : cv.points) r["points"].push_back(num(x));
    }
    line("cylinders", std::to_string(cv.cells.size()));
  }

  void diffset() {
    const DigitSystem sys = system();
    const LocalDiffParams p = local_params(sys.base());
    params()["depth"] = p.depth;
    params()["resolution"] = p.resolution;
    const CircleSet d = difference_set(cover_at_depth(sys, p.depth), p.resolution);
    auto& r = results();
    r["difference_set"] = circle_json(d);
    r["restricted"] = !d.is_full();
    line("marked", std::to_string(d.count()));
    line("max gap", fmt(d.max_gap()));
    line("restricted", d.is_full() ? "no" : "yes");
  }

  void localdiff() {
    const DigitSystem sys = system();
    LocalDiffParams p = local_params(sys.base());
    if (cfg_.b) p.phase_base = *cfg_.b;
    params() = params_json(p);
    auto& r = results();
    CircleSet f(p.resolution);
    if (!cfg_.point.empty()) {
      const PointSpec x = parse_point(cfg_.point, sys.base());
      f = local_difference_set(sys, x, p);
      r["aggregate"] = false;
      r["point"] = format_point(x);
      r["value"] = num(point_value(x, sys.base()));
    } else {
      params()["net_depth"] = cfg_.net_depth;
      f = aggregate_local_difference_set(sys, p, cfg_.net_depth);
      r["aggregate"] = true;
    }
    r["local_difference_set"] = circle_json(f);
    line("marked", std::to_string(f.count()));
    line("max gap", fmt(f.max_gap()));
  }

  void transform_law() {
    const DigitSystem sys = system();
    const SmoothMap f = map();
    const LocalDiffParams p = local_params(sys.base());
    const PointSpec x = point_for(sys);
    params() = params_json(p);
    params()["tolerance"] = num(cfg_.tol);
    const TransformReport t = verify_transform_law(sys, f, x, p, cfg_.tol);
    auto& r = results();
    r["point"] = format_point(x);
    r["value"] = num(point_value(x, sys.base()));
    r["shift_predicted"] = num(t.shift_predicted);
    r["distance"] = num(t.distance);
    r["observed_cells"] = t.observed_cells;
    r["predicted_cells"] = t.predicted_cells;
    r["verdict"] = to_string(t.verdict);
    verdict_ = to_string(t.verdict);
    fail_if(t.verdict == Verdict::fail);
    line("shift", fmt(t.shift_predicted));
    line("distance", fmt(t.distance));
    line("verdict", to_string(t.verdict));
  }

  void full_circle() {
    const DigitSystem sys = system();
    const int b = b_required();
    const auto depths = depth_list(8, 14);
    const std::uint64_t M = cfg_.resolution.value_or(65536);
    params()["b"] = b;
    params()["depths"] = {depths.front(), depths.back()};
    params()["resolution"] = M;
    params()["net_depth"] = cfg_.net_depth;
    const FullCircleReport fc = claim_full_circle(sys, b, depths, M, cfg_.net_depth);
    auto& r = results();
    r["vacuous"] = fc.vacuous;
    r["rows"] = Json::array();
    for (const auto& row : fc.rows) {
      Json j;
      j["depth"] = row.depth;
      j["gap"] = num(row.gap);
      j["cumulative_gap"] = num(row.cumulative_gap);
      j["marked"] = row.marked;
      r["rows"].push_back(j);
      line("depth " + std::to_string(row.depth), "gap " + fmt(row.gap) + ", cumulative " + fmt(row.cumulative_gap));
    }
    if (fc.vacuous) {
      verdict_ = "vacuous";
      line("verdict", "vacuous (finite set)");
      return;
    }
    r["non_increasing"] = fc.non_increasing;
    r["final_gap"] = fc.rows.empty() ? 1.0 : num(fc.rows.back().cumulative_gap);
    r["x0"] = fc.x0 ? Json(format_point(*fc.x0)) : Json(nullptr);
    r["mechanism"] = Json::array();
    for (const auto& m : fc.mechanism) {
      Json j;
      j["iterate"] = m.iterate;
      j["rotation"] = num(m.rotation);
      j["contained"] = m.contained;
      j["missing"] = m.missing;
      r["mechanism"].push_back(j);
    }
    r["mechanism_ok"] = fc.mechanism_ok;
    fail_if(!fc.non_increasing || !fc.mechanism_ok);
    line("non-increasing", fc.non_increasing ? "yes" : "no");
    line("mechanism", fc.mechanism_ok ? "ok" : "violated");
  }

  void prop_dim() {
    const DigitSystem sys = system();
    const SmoothMap f = map();
    const int b = b_required();
    const auto depths = depth_list(8, 12);
    LocalDiffParams p = local_params(sys.base());
    const std::uint64_t M = p.resolution;
    params()["b"] = b;
    params()["depths"] = {depths.front(), depths.back()};
    params()["local"] = params_json(p);
    params()["net_depth"] = cfg_.net_depth;

    const MapDimReport md = check_map_dim_inequality(sys, f, b, depths, M, cfg_.net_depth);
    Json ineq;
    ineq["rows"] = Json::array();
    for (const auto& row : md.rows) {
      Json j;
      j["depth"] = row.depth;
      j["usable"] = row.usable;
      j["dim_fx"] = num(row.dim_fx);
      j["dim_fy"] = num(row.dim_fy);
      ineq["rows"].push_back(j);
    }
    ineq["bdim_x"] = num(md.bdim_x);
    ineq["dim_fx"] = num(md.dim_fx);
    ineq["dim_fy"] = num(md.dim_fy);
    ineq["slack"] = num(md.slack);
    ineq["verdict"] = to_string(md.verdict);

    const InclusionReport inc = check_inclusion_prop(sys, b, p, p.depth, cfg_.net_depth);
    Json incl;
    incl["checked"] = inc.checked;
    incl["violations"] = inc.violations;
    incl["violating_cells"] = inc.violating_cells;

    results()["inequality"] = ineq;
    results()["inclusion"] = incl;
    fail_if(md.verdict == Verdict::fail || inc.violations > 0);
    verdict_ = md.verdict == Verdict::inconclusive ? "inconclusive" : "pass";
    line("inequality", std::string(to_string(md.verdict)) + " (dim F(fX) " + fmt(md.dim_fy) + ", dim F(X) " +
                           fmt(md.dim_fx) + ", dim X " + fmt(md.bdim_x) + ")");
    line("inclusion violations", std::to_string(inc.violations) + " of " + std::to_string(inc.checked));
  }

  void affine_search() {
    const DigitSystem sys = system();
    const int depth = cfg_.depth.value_or(10);
    require(cfg_.translations >= 1, "translations must be >= 1");
    const auto rs = rational_grid(cfg_.max_den, cfg_.max_abs);
    std::vector<long double> ts;
    for (int i = 0; i < cfg_.translations; ++i)
      ts.push_back(static_cast<long double>(i) / static_cast<long double>(cfg_.translations));
    params()["depth"] = depth;
    params()["max_den"] = cfg_.max_den;
    params()["max_abs"] = num(cfg_.max_abs);
    params()["translations"] = cfg_.translations;

    const auto res = affine_embedding_search(sys, rs, ts, depth);
    Json surv = Json::array();
    std::map<int, std::uint64_t> refuted;
    bool all_comm = true;
    for (const auto& a : res) {
      if (!a.passes) {
        ++refuted[a.refuted_at];
        continue;
      }
      const bool comm = a.exact ? a.commensurable : a.grid_distance < 1e-9L;
      all_comm = all_comm && comm;
      Json j;
      j["r"] = ratio_text(a.r);
      j["t"] = num(a.t);
      j["commensurable"] = comm;
      if (a.exact && a.commensurable) j["log_a_r"] = ratio_text(a.log_ratio);
      if (!a.exact) j["grid_distance"] = num(a.grid_distance);
      surv.push_back(j);
    }
    Json by_depth = Json::object();
    for (const auto& [d, n] : refuted) by_depth[std::to_string(d)] = n;
    auto& r = results();
    r["tested"] = res.size();
    r["survivor_count"] = surv.size();
    r["all_survivors_commensurable"] = all_comm;
    r["refuted_by_depth"] = by_depth;
    r["survivors"] = surv;
    fail_if(!all_comm);
    line("tested", std::to_string(res.size()));
    line("survivors", std::to_string(surv.size()));
    line("all survivors commensurable", all_comm ? "yes" : "no");
  }

  void measure_dim() {
    const DigitSystem sys = system();
    require(cfg_.weights == "uniform" || cfg_.weights == "parry", "weights must be uniform or parry");
    const MarkovMeasure mu = markov_from_system(sys, cfg_.weights);
    const int depth = cfg_.depth.value_or(8);
    params()["weights"] = cfg_.weights;
    params()["samples"] = cfg_.samples;
    params()["seed"] = cfg_.seed;
    params()["depth"] = depth;
    auto& r = results();
    Json m;
    m["weights"] = mu.weights;
    m["entropy"] = num(mu.entropy);
    m["dimension"] = num(mu.dimension);
    r["measure"] = m;

    EmpiricalCloud cloud;
    ScaleEntropy est;
    if (!cfg_.map_path.empty()) {
      const SmoothMap f = map();
      params()["iterations"] = cfg_.iterations;
      const CurvedProxyReport proxy = curved_proxy_experiment(mu, f, {cfg_.iterations, cfg_.samples, depth, cfg_.seed}, &cloud);
      est = proxy.estimate;
      Json t;
      t["s"] = num(proxy.s);
      t["margin"] = num(proxy.margin);
      t["clamped"] = proxy.clamped;
      t["disclaimer"] = proxy.disclaimer;
      r["proxy"] = t;
      verdict_ = proxy.margin > 0 ? "positive margin" : "non-positive margin";
      line("margin", fmt(proxy.margin));
    } else {
      cloud = sample_measure(mu, cfg_.samples, cfg_.seed);
      est = entropy_at_scale(cloud, depth, mu.base);
    }
    r["provenance"] = cloud.provenance;
    Json e;
    e["dimension"] = num(est.dimension);
    e["std_error"] = num(est.std_error);
    e["plugin_entropy"] = num(est.plugin);
    e["corrected_entropy"] = num(est.corrected);
    e["occupied"] = est.occupied;
    e["undersampled"] = est.undersampled;
    r["estimate"] = e;
    if (depth * std::log2(static_cast<double>(mu.base)) <= 20) r["histogram"] = cylinder_histogram(cloud, depth, mu.base);
    line("dimension", fmt(mu.dimension));
    line("estimate", fmt(est.dimension) + " +- " + fmt(est.std_error));
  }

  void classify_cmd() {
    const DigitSystem sys = system();
    const Classification c = classify(sys);
    auto& r = results();
    r["base"] = sys.base();
    r["states"] = sys.num_states();
    r["recurrent_classes"] = cyclic_components(sys).size();
    r["finite"] = c.finite;
    r["perfect"] = c.perfect;
    r["transitive"] = c.transitive;
    if (c.finite) {
      r["points"] = Json::array();
      for (auto x : finite_points(sys)) r["points"].push_back(num(x));
    }
    line("finite", c.finite ? "yes" : "no");
    line("perfect", c.perfect ? "yes" : "no");
    line("transitive", c.transitive ? "yes" : "no");
  }
};

std::string located(const ParseError& e) {
  std::string msg = e.what();
  if (e.line() > 0) msg += " (line " + std::to_string(e.line()) + ", column " + std::to_string(e.column()) + ")";
  return msg;
}

}  // namespace

RunOutcome run(const ExperimentConfig& cfg) {
  RunOutcome out;
  try {
    return Runner(cfg).execute();
  } catch (const ParseError& e) {
    out.error = "parse error: " + located(e);
  } catch (const std::ios_base::failure& e) {
    out.error = std::string("i/o error: ") + e.what();
  } catch (const std::exception& e) {
    out.error = std::string("error: ") + e.what();
  }
  out.status = kExitUsage;
  return out;
}

void emit_report(const std::string& report, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot write report: " + path);
  f << report;
  f.flush();
  if (!f) throw std::ios_base::failure("cannot write report: " + path);
}

std::pair<int, int> parse_depths(std::string_view text) {
  auto to_int = [&](std::string_view s) {
    int v = 0;
    if (s.empty()) throw std::invalid_argument("bad depth range '" + std::string(text) + "'");
    for (char c : s) {
      if (c < '0' || c > '9' || v > 1000) throw std::invalid_argument("bad depth range '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const int d = to_int(text);
    return {d, d};
  }
  const std::pair<int, int> r{to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
  if (r.first > r.second) throw std::invalid_argument("bad depth range '" + std::string(text) + "': lo > hi");
  return r;
}

PointSpec parse_point(std::string_view text, int base) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')' || open + 2 > text.size() - 1)
    throw std::invalid_argument("point must look like PRE(PERIOD) with a nonempty period");
  auto digits = [&](std::string_view s) {
    std::vector<int> out;
    for (char c : s) {
      const char* pos = std::strchr(kDigits, std::tolower(static_cast<unsigned char>(c)));
      if (!pos || c == '\0' || pos - kDigits >= base)
        throw std::invalid_argument("point digit '" + std::string(1, c) + "' is not valid in base " + std::to_string(base));
      out.push_back(static_cast<int>(pos - kDigits));
    }
    return out;
  };
  return {digits(text.substr(0, open)), digits(text.substr(open + 1, text.size() - open - 2))};
}

std::string format_point(const PointSpec& p) {
  std::string s;
  for (int d : p.preperiod) s += kDigits[d];
  s += '(';
  for (int d : p.period) s += kDigits[d];
  s += ')';
  return s;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"adiclab: a-adic local difference sets of x a-invariant circle sets"};
  ExperimentConfig cfg;
  std::string depths, epsilon, max_abs, tol;
  app.add_option("command", cfg.command,
                 "entropy | cover | diffset | localdiff | transform-law | full-circle | prop-dim | affine-search | "
                 "measure-dim | classify")
      ->required();
  app.add_option("--set", cfg.set_path, "digit system definition (JSON)");
  app.add_option("--map", cfg.map_path, "smooth map definition (JSON)");
  app.add_option("--point", cfg.point, "point as PRE(PERIOD) digits, e.g. (0) or 2(02)");
  app.add_option("--depth", cfg.depth, "cylinder depth n");
  app.add_option("--depths", depths, "depth range lo..hi");
  app.add_option("--resolution", cfg.resolution, "circle cells M");
  app.add_option("--epsilon", epsilon, "dilation radius");
  app.add_option("--guard", cfg.guard, "guard scales g");
  app.add_option("--b", cfg.b, "second base");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--jobs", cfg.jobs, "worker threads (0 = hardware)");
  app.add_option("--out", cfg.out_path, "report path (default: stdout)");
  app.add_flag("--summary", cfg.summary, "print a plain-text summary");
  app.add_flag("--timing", cfg.timing, "record wall time in the report");
  app.add_option("--weights", cfg.weights, "Markov weights: uniform | parry");
  app.add_option("--samples", cfg.samples, "sample count S");
  app.add_option("--iterations", cfg.iterations, "Cesaro length N");
  app.add_option("--net-depth", cfg.net_depth, "depth of the point net for aggregates");
  app.add_option("--max-den", cfg.max_den, "largest denominator in the ratio grid");
  app.add_option("--max-abs", max_abs, "largest |r| in the ratio grid");
  app.add_option("--translations", cfg.translations, "translation grid size T (t = i/T)");
  app.add_option("--tol", tol, "Hausdorff tolerance");
  try {
    app.parse(argc, argv);
    if (!depths.empty()) cfg.depths = parse_depths(depths);
    if (!epsilon.empty()) cfg.epsilon = std::stold(epsilon);
    if (!max_abs.empty()) cfg.max_abs = std::stold(max_abs);
    if (!tol.empty()) cfg.tol = std::stold(tol);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  RunOutcome r = run(cfg);
  if (!r.error.empty()) {
    err << r.error << "\n";
    return r.status;
  }
  if (!cfg.out_path.empty()) {
    try {
      emit_report(r.report, cfg.out_path);
    } catch (const std::exception& e) {
      err << "i/o error: " << e.what() << "\n";
      return kExitUsage;
    }
  } else if (!cfg.summary) {
    out << r.report;
  }
  if (cfg.summary) out << r.summary;
  return r.status;
}

}  // namespace adiclab
