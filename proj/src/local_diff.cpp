#include "adiclab/local_diff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "adiclab/adic.hpp"
#include "adiclab/errors.hpp"
#include "adiclab/parallel.hpp"

namespace adiclab {

namespace {

constexpr std::uint64_t kDefaultMaxPairs = 1'000'000'000;

// floor(num / den) for den > 0.
std::int64_t floor_div(__int128 num, __int128 den) {
  __int128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return static_cast<std::int64_t>(q);
}

std::uint64_t ipow(std::uint64_t a, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

// Signed representative of v mod 1 in (-1/2, 1/2].
long double signed_wrap(long double v) {
  long double w = v - std::floor(v);
  return w > 0.5L ? w - 1.0L : w;
}

class PhaseRaster {
 public:
  PhaseRaster(std::uint64_t m, long double phase_base, long double offset)
      : set_(m), inv_log_(1.0L / std::log(phase_base)), offset_(offset) {}
  // Marks (offset - log_b |delta|) mod 1.
  void add(long double delta) { set_.set(set_.cell_of(offset_ - std::log(std::fabs(delta)) * inv_log_)); }
  // Marks the phases of every distance in [lo, hi], 0 < lo <= hi.
  void add_arc(long double lo, long double hi) {
    if (!(lo > 0)) {
      set_.set_run(0, set_.resolution());
      return;
    }
    const long double m = static_cast<long double>(set_.resolution());
    const long double p_lo = offset_ - std::log(hi) * inv_log_;
    const long double p_hi = offset_ - std::log(lo) * inv_log_;
    const auto first = static_cast<std::int64_t>(std::floor(p_lo * m));
    const auto last = static_cast<std::int64_t>(std::floor(p_hi * m));
    set_.set_run(first, static_cast<std::uint64_t>(last - first + 1));
  }
  CircleSet take() { return std::move(set_); }

 private:
  CircleSet set_;
  long double inv_log_;
  long double offset_;
};

struct PairBudget {
  std::uint64_t cap = max_pairs();
  std::uint64_t used = 0;
  void charge(std::uint64_t n) {
    used += n;
    if (used > cap) throw DepthTooLarge("depth too large: pair enumeration exceeds " + std::to_string(cap));
  }
};

// Cylinder representative: midpoint, half-length and whether the cylinder
// lies entirely in the set.
template <class T>
struct Site {
  T pos;
  T half;
  bool solid;
  friend bool operator<(const Site& x, const Site& y) { return x.pos < y.pos; }
};

// Calls emit(i, j) for all pairs i < j of sorted sites with gap >= threshold.
template <class T, class Emit>
void for_pairs(const std::vector<Site<T>>& sites, T threshold, PairBudget& budget, Emit&& emit) {
  const std::size_t n = sites.size();
  budget.charge(static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    auto first = std::lower_bound(sites.begin() + static_cast<std::ptrdiff_t>(i) + 1, sites.end(),
                                  Site<T>{sites[i].pos + threshold, T{}, false});
    for (auto it = first; it != sites.end(); ++it) emit(sites[i], *it);
  }
}

CircleSet local_diff_integer(const Cover& cover, long double x, const LocalDiffParams& p) {
  const int a = cover.base;
  const int n = cover.depth;
  const std::int64_t span = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(a), n));
  const long double pb = p.phase_base > 0 ? p.phase_base : a;
  // Integer distances are in units of a^-n.
  const long double offset = pb == a ? 0.0L : n * std::log(static_cast<long double>(a)) / std::log(pb);
  const long double xu = wrap01(x) * static_cast<long double>(span);
  const std::int64_t threshold = static_cast<std::int64_t>(ipow(static_cast<std::uint64_t>(a), p.guard));
  PairBudget budget;
  CircleSet result = CircleSet::full(p.resolution);
  for (int k = p.inner_scale; k <= p.depth - p.guard - 1; ++k) {
    const long double radius = static_cast<long double>(ipow(static_cast<std::uint64_t>(a), n - k));
    std::vector<Site<std::int64_t>> sites;
    const bool flags = cover.solid.size() == cover.cells.size();
    auto solid_at = [&](std::size_t i) { return flags && cover.solid[i] != 0; };
    // Cylinder [j, j+1] meets [xu - radius, xu + radius] on the circle.
    const auto lo = static_cast<std::int64_t>(std::floor(xu - radius)) - 1;
    const auto hi = static_cast<std::int64_t>(std::floor(xu + radius));
    if (p.circle && hi - lo + 1 >= span) {
      for (std::size_t i = 0; i < cover.cells.size(); ++i)
        sites.push_back({static_cast<std::int64_t>(cover.cells[i]), 0, solid_at(i)});
    } else {
      for (std::int64_t shift : {-span, std::int64_t{0}, span}) {
        if (!p.circle && shift != 0) continue;
        const std::int64_t a_lo = std::max(lo - shift, std::int64_t{0});
        const std::int64_t a_hi = std::min(hi - shift, span - 1);
        if (a_lo > a_hi) continue;
        auto first = std::lower_bound(cover.cells.begin(), cover.cells.end(), static_cast<std::uint64_t>(a_lo));
        for (auto it = first; it != cover.cells.end() && static_cast<std::int64_t>(*it) <= a_hi; ++it) {
          const long double c = static_cast<long double>(static_cast<std::int64_t>(*it) + shift);
          if (c <= xu + radius && c + 1 >= xu - radius)
            sites.push_back({static_cast<std::int64_t>(*it) + shift, 0,
                             solid_at(static_cast<std::size_t>(it - cover.cells.begin()))});
        }
      }
      std::sort(sites.begin(), sites.end());
    }
    // Phases depend only on the integer distance: bit 0 marks a midpoint
    // distance, bit 1 a full arc between solid cylinders.
    std::vector<std::uint8_t> seen(sites.empty() ? 0 : static_cast<std::size_t>(sites.back().pos - sites.front().pos) + 1, 0);
    for_pairs(sites, threshold, budget, [&](const auto& u, const auto& v) {
      seen[static_cast<std::size_t>(v.pos - u.pos)] |= (u.solid && v.solid) ? 2 : 1;
    });
    PhaseRaster raster(p.resolution, pb, offset);
    for (std::size_t d = 0; d < seen.size(); ++d) {
      if (seen[d] & 2) raster.add_arc(static_cast<long double>(d) - 1, static_cast<long double>(d) + 1);
      else if (seen[d] & 1) raster.add(static_cast<long double>(d));
    }
    result &= raster.take().dilate(p.dilation_cells());
    if (result.empty()) break;
  }
  return result;
}

CircleSet local_diff_real(const Cover& cover, long double x, const LocalDiffParams& p) {
  const long double a = cover.base;
  const long double pb = p.phase_base > 0 ? p.phase_base : a;
  const long double threshold = p.scale * std::pow(a, -static_cast<long double>(p.depth - p.guard));
  PairBudget budget;
  CircleSet result = CircleSet::full(p.resolution);
  for (int k = p.inner_scale; k <= p.depth - p.guard - 1; ++k) {
    const long double radius = p.scale * std::pow(a, -static_cast<long double>(k));
    const bool flags = cover.solid.size() == cover.intervals.size();
    std::vector<Site<long double>> sites;
    for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
      const auto& iv = cover.intervals[i];
      const long double lo = p.circle ? signed_wrap(iv.lo - x) : iv.lo - x;
      const long double hi = lo + iv.length();
      if ((p.circle && radius >= 0.5L) || (lo <= radius && hi >= -radius))
        sites.push_back({lo + iv.length() / 2, iv.length() / 2, flags && cover.solid[i] != 0});
    }
    std::sort(sites.begin(), sites.end());
    PhaseRaster raster(p.resolution, pb, 0.0L);
    for_pairs(sites, threshold, budget, [&](const auto& u, const auto& v) {
      const long double d = v.pos - u.pos;
      if (u.solid && v.solid) raster.add_arc(d - u.half - v.half, d + u.half + v.half);
      else raster.add(d);
    });
    result &= raster.take().dilate(p.dilation_cells());
    if (result.empty()) break;
  }
  return result;
}

}  // namespace

void LocalDiffParams::validate() const {
  if (guard < 1) throw std::invalid_argument("local difference: guard must be >= 1");
  if (inner_scale < 0) throw std::invalid_argument("local difference: inner scale must be >= 0");
  if (inner_scale + guard >= depth) throw std::invalid_argument("local difference: need inner_scale + guard < depth");
  if (resolution < 2 || resolution > kMaxResolution) throw std::invalid_argument("local difference: bad resolution");
  if (epsilon * static_cast<long double>(resolution) < 2.0L - 1e-9L)
    throw std::invalid_argument("local difference: epsilon must be >= 2/M");
  if (phase_base != 0 && !(phase_base > 1)) throw std::invalid_argument("local difference: phase base must be > 1");
  if (!(scale > 0)) throw std::invalid_argument("local difference: scale must be > 0");
}

std::uint64_t LocalDiffParams::dilation_cells() const {
  return static_cast<std::uint64_t>(std::ceil(epsilon * static_cast<long double>(resolution) - 1e-9L));
}

LocalDiffParams LocalDiffParams::with_depth(int /*base*/, int depth, std::uint64_t resolution) {
  LocalDiffParams p;
  p.depth = depth;
  p.guard = 3;
  p.inner_scale = std::max(0, depth - p.guard - 3);
  p.resolution = resolution;
  p.epsilon = 4.0L / static_cast<long double>(resolution);
  return p;
}

LocalDiffParams LocalDiffParams::defaults(int base) {
  const int depth = base == 2 ? 14 : base == 3 ? 12 : std::max(6, static_cast<int>(std::floor(19 / std::log2(base))));
  return with_depth(base, depth, 65536);
}

std::uint64_t max_pairs() {
  if (const char* env = std::getenv("ADICLAB_MAX_PAIRS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultMaxPairs;
}

CircleSet difference_set(const Cover& cover, std::uint64_t M) {
  if (!cover.points.empty()) {
    const auto& pts = cover.points;
    PairBudget budget;
    budget.charge(static_cast<std::uint64_t>(pts.size()) * pts.size());
    CircleSet s(M);
    for (long double u : pts)
      for (long double v : pts) s.set(s.cell_of(u - v));
    return s;
  }
  if (cover.intervals.empty()) return CircleSet(M);
  PairBudget budget;
  budget.charge(static_cast<std::uint64_t>(cover.intervals.size()) * cover.intervals.size());
  CircleSet s(M);
  if (cover.adic) {
    if (cover.depth * std::log2(static_cast<double>(cover.base)) > 32)
      throw DepthTooLarge("depth too large: difference bitmap exceeds 2^32 cells");
    const std::uint64_t span = ipow(static_cast<std::uint64_t>(cover.base), cover.depth);
    std::vector<std::uint64_t> diffs((span + 63) / 64, 0);
    for (auto ci : cover.cells)
      for (auto cj : cover.cells) {
        const std::uint64_t d = ci >= cj ? ci - cj : ci + span - cj;
        diffs[d >> 6] |= std::uint64_t{1} << (d & 63);
      }
    // Pair (i, j) realizes differences in [(d - 1) a^-n, (d + 1) a^-n].
    for (std::uint64_t d = 0; d < span; ++d) {
      if (!(diffs[d >> 6] >> (d & 63) & 1u)) continue;
      const auto first = floor_div(static_cast<__int128>(static_cast<std::int64_t>(d) - 1) * M, span);
      const auto last = floor_div(static_cast<__int128>(d + 1) * M, span);
      s.set_run(first, static_cast<std::uint64_t>(last - first + 1));
    }
  } else {
    std::vector<Interval> arcs;
    for (const auto& u : cover.intervals)
      for (const auto& v : cover.intervals) {
        if (u.hi - v.lo - (u.lo - v.hi) >= 1.0L) return CircleSet::full(M);
        arcs.push_back({u.lo - v.hi, u.hi - v.lo});
        if (arcs.size() >= 1 << 20) {
          s |= rasterize_intervals(arcs, M);
          arcs.clear();
        }
      }
    s |= rasterize_intervals(arcs, M);
  }
  return s.dilate(1);
}

CircleSet local_difference_set(const Cover& cover, long double x, const LocalDiffParams& p) {
  p.validate();
  if (cover.adic && cover.depth == p.depth && p.scale == 1 && !cover.cells.empty()) return local_diff_integer(cover, x, p);
  return local_diff_real(cover, x, p);
}

CircleSet local_difference_set(const DigitSystem& sys, const PointSpec& x, const LocalDiffParams& p) {
  if (!is_admissible(sys, x)) throw std::domain_error("local difference: point is not admissible");
  p.validate();
  const Cover cover = cover_at_depth(sys, p.depth);
  return local_difference_set(cover, point_value(x, sys.base()), p);
}

std::vector<PointSpec> net_points(const DigitSystem& sys, int m) {
  std::vector<PointSpec> out;
  for (const auto& w : admissible_words(sys, m)) out.push_back(canonical_point(sys, w));
  return out;
}

CircleSet aggregate_local_difference_set(const Cover& cover, std::span<const long double> points,
                                         const LocalDiffParams& p) {
  p.validate();
  std::vector<CircleSet> parts(points.size(), CircleSet(p.resolution));
  parallel_for(points.size(), [&](std::size_t i) { parts[i] = local_difference_set(cover, points[i], p); });
  CircleSet out(p.resolution);
  for (const auto& part : parts) out |= part;
  return out;
}

CircleSet aggregate_local_difference_set(const DigitSystem& sys, const LocalDiffParams& p, int net_depth) {
  p.validate();
  const Cover cover = cover_at_depth(sys, p.depth);
  std::vector<long double> xs;
  for (const auto& ps : net_points(sys, net_depth)) xs.push_back(point_value(ps, sys.base()));
  return aggregate_local_difference_set(cover, xs, p);
}

RestrictedVerdict self_restricted_test(const DigitSystem& sys, int depth, std::uint64_t M) {
  const CircleSet d = difference_set(cover_at_depth(sys, depth), M);
  return {!d.is_full(), d.max_gap()};
}

}  // namespace adiclab
