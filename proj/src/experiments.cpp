#include "adiclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adiclab/parallel.hpp"

namespace adiclab {

namespace {

constexpr std::uint64_t kMechanismSlackCells = 2;
constexpr std::uint64_t kInclusionSlackCells = 2;
constexpr int kMechanismIterates = 3;
constexpr std::int64_t kExactRatioLimit = 1'000'000'000'000;
constexpr int kGridDen = 16;
constexpr long double kContainSlack = 1e-15L;

// Window parameters for an image cover whose cylinders are |f'| times longer.
LocalDiffParams image_params(const LocalDiffParams& p, long double deriv) {
  LocalDiffParams q = p;
  q.scale = p.scale * std::fabs(deriv);
  return q;
}

// Distance of v to the nearest p/q with 1 <= q <= max_den.
long double grid_distance(long double v, int max_den) {
  long double best = 1;
  for (int q = 1; q <= max_den; ++q) best = std::min(best, std::fabs(v * q - std::nearbyint(v * q)) / q);
  return best;
}

struct MergedCover {
  std::vector<Interval> cylinders;
  std::vector<Interval> dilated;  // merged one-cylinder dilation, ascending
};

MergedCover merged_cover(const DigitSystem& sys, int d) {
  const Cover c = cover_at_depth(sys, d);
  MergedCover m;
  m.cylinders = c.intervals;
  const long double w = std::pow(static_cast<long double>(sys.base()), -static_cast<long double>(d));
  std::int64_t run_lo = 0, run_hi = -1;
  for (auto cell : c.cells) {
    const auto lo = static_cast<std::int64_t>(cell) - 1, hi = static_cast<std::int64_t>(cell) + 2;
    if (run_hi >= run_lo && lo <= run_hi) {
      run_hi = std::max(run_hi, hi);
      continue;
    }
    if (run_hi >= run_lo) m.dilated.push_back({run_lo * w, run_hi * w});
    run_lo = lo;
    run_hi = hi;
  }
  if (run_hi >= run_lo) m.dilated.push_back({run_lo * w, run_hi * w});
  return m;
}

bool contained(const std::vector<Interval>& merged, long double lo, long double hi) {
  auto it = std::upper_bound(merged.begin(), merged.end(), lo + kContainSlack,
                             [](long double v, const Interval& iv) { return v < iv.lo; });
  if (it == merged.begin()) return false;
  --it;
  return hi <= it->hi + kContainSlack;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

TransformReport verify_transform_law(const DigitSystem& sys, const SmoothMap& f, const PointSpec& x,
                                     const LocalDiffParams& p, long double tol) {
  if (!is_admissible(sys, x)) throw std::domain_error("transform law: point is not admissible");
  p.validate();
  const int a = sys.base();
  const long double pb = p.phase_base > 0 ? p.phase_base : a;
  const long double xv = point_value(x, a);
  const MapValue mv = f.eval(xv);
  const Cover cover = cover_at_depth(sys, p.depth);
  LocalDiffParams line = p;
  line.circle = false;
  const LocalDiffParams q = image_params(line, mv.derivative);
  q.validate();

  TransformReport rep;
  rep.shift_predicted = adic_phase(mv.derivative, pb);
  rep.depth = p.depth;
  rep.resolution = p.resolution;
  rep.tolerance = tol;
  const CircleSet predicted = local_difference_set(cover, xv, line).rotate(rep.shift_predicted);
  const CircleSet observed = local_difference_set(image_cover(cover, f), mv.value, q);
  rep.predicted_cells = predicted.count();
  rep.observed_cells = observed.count();
  if (predicted.empty() || observed.empty()) {
    rep.distance = 1;
    rep.verdict = Verdict::inconclusive;
    return rep;
  }
  rep.distance = hausdorff_distance(observed, predicted);
  rep.verdict = rep.distance <= tol ? Verdict::pass : Verdict::fail;
  return rep;
}

DimensionEstimate circle_box_dimension(const CircleSet& s) {
  const std::uint64_t M = s.resolution();
  const int jmax = static_cast<int>(std::floor(std::log2(static_cast<long double>(M)))) - 3;
  std::map<int, long double> counts;
  const auto cells = s.cells();
  for (int j = 3; j <= jmax; ++j) {
    const std::uint64_t boxes = std::uint64_t{1} << j;
    std::uint64_t n = 0, last = boxes;
    for (auto c : cells) {
      const std::uint64_t box = static_cast<std::uint64_t>((static_cast<unsigned __int128>(c) * boxes) / M);
      if (box != last) {
        ++n;
        last = box;
      }
    }
    counts[j] = static_cast<long double>(n);
  }
  if (cells.empty()) {
    DimensionEstimate est;
    est.counts = counts;
    return est;
  }
  return box_count_estimate(counts, 2);
}

FullCircleReport claim_full_circle(const DigitSystem& sys, int b, const std::vector<int>& depths, std::uint64_t M,
                                   int net_depth) {
  const int a = sys.base();
  if (b < 2) throw std::invalid_argument("full circle: b must be >= 2");
  if (commensurability(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)).related)
    throw std::invalid_argument("full circle: precondition fails, bases are commensurable");
  if (depths.empty()) throw std::invalid_argument("full circle: no depths");

  FullCircleReport rep;
  rep.base = a;
  rep.b = b;
  if (classify(sys).finite) {
    rep.vacuous = true;
    return rep;
  }
  std::vector<int> sorted = depths;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  auto aggregate_at = [&](int d) {
    LocalDiffParams p = LocalDiffParams::with_depth(a, d, M);
    p.phase_base = b;
    return aggregate_local_difference_set(sys, p, net_depth);
  };
  CircleSet cumulative(M);
  int next = sorted.front();
  for (int d : sorted) {
    CircleSet at_d(M);
    for (; next <= d; ++next) {
      CircleSet agg = aggregate_at(next);
      if (next == d) at_d = agg;
      cumulative |= agg;
    }
    rep.rows.push_back({d, at_d.max_gap(), at_d.count(), cumulative.max_gap()});
  }
  rep.non_increasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].cumulative_gap > rep.rows[i - 1].cumulative_gap) rep.non_increasing = false;

  // F^_{D-n}(T_a^n x0) contains F^_D(x0) rotated by -n log_b a.
  const int deepest = sorted.back();
  LocalDiffParams p = LocalDiffParams::with_depth(a, deepest, M);
  p.phase_base = b;
  const Cover cover = cover_at_depth(sys, deepest);
  CircleSet f0(M);
  for (const auto& ps : net_points(sys, net_depth)) {
    CircleSet s = local_difference_set(cover, point_value(ps, a), p);
    if (!s.empty()) {
      rep.x0 = ps;
      f0 = std::move(s);
      break;
    }
  }
  if (!rep.x0) return rep;
  rep.mechanism_ok = true;
  const long double step = std::log(static_cast<long double>(a)) / std::log(static_cast<long double>(b));
  PointSpec y = *rep.x0;
  for (int n = 1; n <= kMechanismIterates; ++n) {
    y = shift_point(y);
    LocalDiffParams q = LocalDiffParams::with_depth(a, deepest - n, M);
    q.phase_base = b;
    if (q.inner_scale + q.guard >= q.depth) break;
    const CircleSet fy = local_difference_set(cover_at_depth(sys, q.depth), point_value(y, a), q)
                             .dilate(kMechanismSlackCells);
    MechanismRow row;
    row.iterate = n;
    row.rotation = wrap01(-n * step);
    row.missing = (f0.rotate(row.rotation) & fy.complement()).count();
    row.contained = row.missing == 0;
    rep.mechanism_ok = rep.mechanism_ok && row.contained;
    rep.mechanism.push_back(row);
  }
  return rep;
}

MapDimReport check_map_dim_inequality(const DigitSystem& sys, const SmoothMap& f, int b,
                                      const std::vector<int>& depths, std::uint64_t M, int net_depth) {
  const int a = sys.base();
  if (b < 2) throw std::invalid_argument("map dimension: b must be >= 2");
  MapDimReport rep;
  rep.bdim_x = entropy_exact(sys).dim;
  std::vector<long double> xs;
  for (const auto& ps : net_points(sys, net_depth)) xs.push_back(point_value(ps, a));

  for (int d : depths) {
    LocalDiffParams p = LocalDiffParams::with_depth(a, d, M);
    p.phase_base = b;
    const Cover cover = cover_at_depth(sys, d);
    const CircleSet fx = aggregate_local_difference_set(cover, xs, p);
    const Cover image = image_cover(cover, f);
    std::vector<CircleSet> parts(xs.size(), CircleSet(M));
    parallel_for(xs.size(), [&](std::size_t i) {
      MapValue mv;
      try {
        mv = f.eval(xs[i]);
      } catch (const std::domain_error&) {
        return;
      }
      parts[i] = local_difference_set(image, mv.value, image_params(p, mv.derivative));
    });
    CircleSet fy(M);
    for (const auto& part : parts) fy |= part;

    DimRow row;
    row.depth = d;
    row.usable = !fx.empty() && !fy.empty();
    if (row.usable) {
      row.dim_fx = circle_box_dimension(fx).slope;
      row.dim_fy = circle_box_dimension(fy).slope;
    }
    rep.rows.push_back(row);
  }
  const auto usable = std::count_if(rep.rows.begin(), rep.rows.end(), [](const DimRow& r) { return r.usable; });
  if (usable < 3) return rep;
  const DimRow* deepest = nullptr;
  for (const auto& r : rep.rows)
    if (r.usable && (!deepest || r.depth > deepest->depth)) deepest = &r;
  rep.dim_fx = deepest->dim_fx;
  rep.dim_fy = deepest->dim_fy;
  rep.holds = rep.dim_fy >= rep.dim_fx - rep.bdim_x - rep.slack;
  rep.verdict = rep.holds ? Verdict::pass : Verdict::fail;
  return rep;
}

std::vector<AffineResult> affine_embedding_search(const DigitSystem& sys, const std::vector<Ratio>& r_grid,
                                                  const std::vector<long double>& t_grid, int depth) {
  if (depth < 1) throw std::invalid_argument("affine search: depth must be >= 1");
  for (const auto& r : r_grid)
    if (r.num == 0 || r.den <= 0) throw std::invalid_argument("affine search: r must be a nonzero fraction");
  const int a = sys.base();
  std::vector<MergedCover> covers;
  for (int d = 1; d <= depth; ++d) covers.push_back(merged_cover(sys, d));

  const std::size_t nt = t_grid.size();
  std::vector<AffineResult> out(r_grid.size() * nt);
  parallel_for(r_grid.size(), [&](std::size_t ri) {
    const Ratio r = r_grid[ri];
    const long double rv = static_cast<long double>(r.num) / static_cast<long double>(r.den);
    for (std::size_t ti = 0; ti < nt; ++ti) {
      AffineResult& res = out[ri * nt + ti];
      res.r = r;
      res.t = t_grid[ti];
      for (int d = 1; d <= depth && res.refuted_at == 0; ++d) {
        const auto& mc = covers[static_cast<std::size_t>(d - 1)];
        for (const auto& iv : mc.cylinders) {
          const long double y0 = rv * iv.lo + res.t, y1 = rv * iv.hi + res.t;
          if (!contained(mc.dilated, std::min(y0, y1), std::max(y0, y1))) {
            res.refuted_at = d;
            break;
          }
        }
      }
      res.passes = res.refuted_at == 0;
      if (!res.passes) continue;
      const std::uint64_t p = static_cast<std::uint64_t>(r.num < 0 ? -r.num : r.num);
      const std::uint64_t q = static_cast<std::uint64_t>(r.den);
      if (std::max(p, q) <= static_cast<std::uint64_t>(kExactRatioLimit)) {
        res.exact = true;
        const auto v = commensurability_rational(p, q, static_cast<std::uint64_t>(a));
        res.commensurable = v.related;
        res.log_ratio = v.ratio;
      } else {
        const long double lg = std::log(std::fabs(rv)) / std::log(static_cast<long double>(a));
        res.grid_distance = grid_distance(lg, kGridDen);
      }
    }
  });
  return out;
}

std::vector<Ratio> rational_grid(int max_den, long double max_abs) {
  if (max_den < 1 || !(max_abs > 0)) throw std::invalid_argument("rational grid: bad bounds");
  std::vector<Ratio> out;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const auto pmax = static_cast<std::int64_t>(std::floor(max_abs * static_cast<long double>(q) + 1e-12L));
    for (std::int64_t p = 1; p <= pmax; ++p) {
      if (std::gcd(p, q) != 1) continue;
      out.push_back({p, q});
      out.push_back({-p, q});
    }
  }
  std::sort(out.begin(), out.end(), [](const Ratio& x, const Ratio& y) {
    return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
  });
  return out;
}

InclusionReport check_inclusion_prop(const DigitSystem& sys, int b, const LocalDiffParams& p, int diff_depth,
                                     int net_depth) {
  if (b < 2) throw std::invalid_argument("inclusion: b must be >= 2");
  LocalDiffParams q = p;
  q.phase_base = b;
  const CircleSet f = aggregate_local_difference_set(sys, q, net_depth);
  const CircleSet d = difference_set(cover_at_depth(sys, diff_depth), p.resolution).dilate(kInclusionSlackCells);
  InclusionReport rep;
  const long double lb = std::log(static_cast<long double>(b));
  for (auto c : f.cells()) {
    ++rep.checked;
    const long double v = std::exp(-f.cell_midpoint(c) * lb);
    if (!d.test(d.cell_of(v))) {
      ++rep.violations;
      if (rep.violating_cells.size() < 16) rep.violating_cells.push_back(c);
    }
  }
  return rep;
}

}  // namespace adiclab
