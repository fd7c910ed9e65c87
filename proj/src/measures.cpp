#include "adiclab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include "adiclab/parallel.hpp"

namespace adiclab {

namespace {

constexpr int kSpareDigits = 40;
constexpr int kFolds = 10;
constexpr std::uint64_t kMaxHistogramBins = std::uint64_t{1} << 26;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ block));
}

long double unit(std::mt19937_64& g) { return static_cast<long double>(g() >> 11) * 0x1p-53L; }

std::uint64_t ipow(std::uint64_t a, int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= a;
  return r;
}

// Solves pi P = pi, sum pi = 1 on the core by Gaussian elimination.
std::vector<long double> stationary_of(const MarkovMeasure& mu) {
  const std::size_t k = mu.states.size();
  std::map<int, std::size_t> local;
  for (std::size_t i = 0; i < k; ++i) local[mu.states[i]] = i;
  // Rows: equations (P^T - I) pi = 0 with the last one replaced by sum pi = 1.
  std::vector<std::vector<long double>> m(k, std::vector<long double>(k + 1, 0));
  for (std::size_t i = 0; i < k; ++i) {
    m[i][i] -= 1;
    for (int d = 0; d < mu.base; ++d) {
      const int t = mu.next[static_cast<std::size_t>(mu.states[i]) * mu.base + d];
      if (t >= 0 && mu.p(mu.states[i], d) > 0) m[local.at(t)][i] += mu.p(mu.states[i], d);
    }
  }
  std::fill(m[k - 1].begin(), m[k - 1].end(), 1.0L);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    if (std::fabs(m[c][c]) < 1e-300L) throw std::runtime_error("markov measure: singular stationary system");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const long double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  std::vector<long double> pi(k);
  for (std::size_t i = 0; i < k; ++i) pi[i] = std::max(0.0L, m[i][k] / m[i][i]);
  return pi;
}

// Cumulative integer thresholds for digit choice from a raw 64-bit draw.
struct Sampler {
  const MarkovMeasure& mu;
  std::vector<std::uint64_t> start_thr;  // over mu.states
  std::vector<std::uint64_t> digit_thr;  // [state * base + digit]

  static std::vector<std::uint64_t> thresholds(const std::vector<long double>& probs) {
    std::vector<std::uint64_t> t(probs.size(), 0);
    long double acc = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0) continue;
      acc += probs[i];
      t[i] = acc >= 1 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(acc * 0x1p64L);
      last = i;
    }
    t[last] = ~std::uint64_t{0};
    return t;
  }

  explicit Sampler(const MarkovMeasure& m) : mu(m), digit_thr(m.transition.size(), 0) {
    std::vector<long double> pi;
    for (int s : mu.states) pi.push_back(mu.stationary[static_cast<std::size_t>(s)]);
    start_thr = thresholds(pi);
    for (int s : mu.states) {
      const auto row = std::vector<long double>(mu.transition.begin() + static_cast<std::ptrdiff_t>(s) * mu.base,
                                                mu.transition.begin() + static_cast<std::ptrdiff_t>(s + 1) * mu.base);
      const auto t = thresholds(row);
      std::copy(t.begin(), t.end(), digit_thr.begin() + static_cast<std::ptrdiff_t>(s) * mu.base);
    }
  }

  // Digit string of one mu-typical point, starting from the stationary law.
  void draw(std::mt19937_64& g, std::vector<int>& digits) const {
    std::uint64_t r = g();
    std::size_t i = 0;
    while (start_thr[i] == 0 || r >= start_thr[i]) ++i;
    int s = mu.states[i];
    for (auto& d : digits) {
      r = g();
      const std::uint64_t* row = digit_thr.data() + static_cast<std::size_t>(s) * mu.base;
      int c = 0;
      while (row[c] == 0 || r >= row[c]) ++c;
      d = c;
      s = mu.next[static_cast<std::size_t>(s) * mu.base + c];
    }
  }
};

long double digits_value(const std::vector<int>& digits, int base) {
  long double x = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) x = (x + *it) / base;
  return x;
}

template <class Fn>
EmpiricalCloud sample_blocks(std::uint64_t samples, std::uint64_t seed, Fn&& draw) {
  if (samples < 1 || samples > kMaxSamples) throw std::invalid_argument("sampling: S must be in [1, 1e8]");
  EmpiricalCloud cloud;
  cloud.seed = seed;
  cloud.points.resize(samples);
  const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<std::uint64_t> clamped(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    auto g = block_rng(seed, b);
    std::vector<int> scratch;
    const std::size_t lo = b * kSampleBlock, hi = std::min<std::size_t>(samples, lo + kSampleBlock);
    for (std::size_t i = lo; i < hi; ++i) cloud.points[i] = draw(g, clamped[b], scratch);
  });
  for (auto c : clamped) cloud.clamped += c;
  return cloud;
}

// Plug-in entropy (nats) of a list of counts summing to total; zeros ignored.
template <class Counts>
long double plugin_entropy(const Counts& counts, std::uint64_t total, std::uint64_t* occupied) {
  long double h = 0;
  std::uint64_t k = 0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    ++k;
    const long double q = static_cast<long double>(c) / static_cast<long double>(total);
    h -= q * std::log(q);
  }
  if (occupied) *occupied = k;
  return h;
}

std::uint64_t cylinder_of(long double x, std::uint64_t bins) {
  const auto c = static_cast<std::uint64_t>(std::floor(x * static_cast<long double>(bins)));
  return std::min(c, bins - 1);
}

}  // namespace

const char* const kProxyDisclaimer =
    "Sampled proxy: the Cesaro average uses one uniformly random iterate index and the dimension is a "
    "cylinder-entropy estimate at a single scale. The epsilon in the underlying statement is not explicit, "
    "so only the sign of the margin is meaningful.";

MarkovMeasure markov_from_system(const DigitSystem& sys, const std::string& weights,
                                 const std::vector<EdgeWeight>& explicit_weights) {
  const auto comps = cyclic_components(sys);
  if (comps.size() != 1)
    throw std::invalid_argument("markov measure: system is not transitive (" + std::to_string(comps.size()) +
                                " recurrent classes); ergodicity is not guaranteed");
  MarkovMeasure mu;
  mu.base = sys.base();
  mu.weights = weights;
  mu.states = comps.front();
  std::sort(mu.states.begin(), mu.states.end());
  const std::size_t n = static_cast<std::size_t>(sys.num_states()) * mu.base;
  mu.transition.assign(n, 0);
  mu.next.assign(n, -1);
  std::vector<bool> in_core(static_cast<std::size_t>(sys.num_states()), false);
  for (int s : mu.states) in_core[static_cast<std::size_t>(s)] = true;
  for (int s : mu.states)
    for (int d = 0; d < mu.base; ++d)
      if (int t = sys.next(s, d); t >= 0 && in_core[static_cast<std::size_t>(t)])
        mu.next[static_cast<std::size_t>(s) * mu.base + d] = t;

  std::vector<long double> raw(n, 0);
  if (weights == "uniform") {
    for (std::size_t i = 0; i < n; ++i) raw[i] = mu.next[i] >= 0 ? 1 : 0;
  } else if (weights == "parry") {
    const PerronResult pr = perron(sys, mu.states);
    std::map<int, long double> v;
    for (std::size_t i = 0; i < mu.states.size(); ++i) v[mu.states[i]] = pr.vector[i];
    for (int s : mu.states)
      for (int d = 0; d < mu.base; ++d)
        if (int t = mu.next[static_cast<std::size_t>(s) * mu.base + d]; t >= 0)
          raw[static_cast<std::size_t>(s) * mu.base + d] = v.at(t);
  } else if (weights == "explicit") {
    for (const auto& e : explicit_weights) {
      if (e.from < 0 || e.from >= sys.num_states() || e.digit < 0 || e.digit >= mu.base)
        throw std::invalid_argument("markov measure: explicit weight names a nonexistent edge");
      const std::size_t i = static_cast<std::size_t>(e.from) * mu.base + e.digit;
      if (!in_core[static_cast<std::size_t>(e.from)]) continue;
      if (mu.next[i] < 0) throw std::invalid_argument("markov measure: explicit weight on a missing edge");
      if (!(e.weight >= 0)) throw std::invalid_argument("markov measure: weights must be >= 0");
      raw[i] = e.weight;
    }
  } else {
    throw std::invalid_argument("markov measure: weights must be uniform, parry or explicit");
  }
  for (int s : mu.states) {
    long double total = 0;
    for (int d = 0; d < mu.base; ++d) total += raw[static_cast<std::size_t>(s) * mu.base + d];
    if (!(total > 0)) throw std::invalid_argument("markov measure: a core state has zero total weight");
    for (int d = 0; d < mu.base; ++d)
      mu.transition[static_cast<std::size_t>(s) * mu.base + d] = raw[static_cast<std::size_t>(s) * mu.base + d] / total;
  }

  const auto pi = stationary_of(mu);
  mu.stationary.assign(static_cast<std::size_t>(sys.num_states()), 0);
  for (std::size_t i = 0; i < mu.states.size(); ++i) mu.stationary[static_cast<std::size_t>(mu.states[i])] = pi[i];
  for (int s : mu.states)
    for (int d = 0; d < mu.base; ++d)
      if (const long double q = mu.p(s, d); q > 0)
        mu.entropy -= mu.stationary[static_cast<std::size_t>(s)] * q * std::log(q);
  mu.dimension = mu.entropy / std::log(static_cast<long double>(mu.base));
  return mu;
}

EmpiricalCloud sample_measure(const MarkovMeasure& mu, std::uint64_t samples, std::uint64_t seed) {
  const int len = static_cast<int>(std::ceil(64 / std::log2(static_cast<long double>(mu.base)))) + 2;
  const Sampler sampler(mu);
  EmpiricalCloud cloud = sample_blocks(samples, seed, [&](std::mt19937_64& g, std::uint64_t&, std::vector<int>& digits) {
    digits.resize(static_cast<std::size_t>(len));
    sampler.draw(g, digits);
    return std::min(digits_value(digits, mu.base), std::nextafter(1.0L, 0.0L));
  });
  cloud.provenance = "direct samples of a " + mu.weights + " Markov measure, base " + std::to_string(mu.base);
  return cloud;
}

EmpiricalCloud cesaro_pushforward_samples(const MarkovMeasure& mu, const SmoothMap& f, int N, std::uint64_t samples,
                                          std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("cesaro: N must be >= 1");
  if (N * std::log2(static_cast<long double>(mu.base)) > 40)
    throw std::invalid_argument("cesaro: N log2(a) must be <= 40 for long double precision");
  const long double below_one = std::nextafter(1.0L, 0.0L);
  const Sampler sampler(mu);
  EmpiricalCloud cloud =
      sample_blocks(samples, seed, [&](std::mt19937_64& g, std::uint64_t& clamped, std::vector<int>& digits) {
    const auto n = static_cast<int>(std::floor(unit(g) * N));
    digits.resize(static_cast<std::size_t>(N + kSpareDigits));
    sampler.draw(g, digits);
    long double y = f.eval(digits_value(digits, mu.base)).value;
    if (y < 0 || y >= 1) {
      ++clamped;
      y = std::clamp(y, 0.0L, below_one);
    }
    for (int i = 0; i < n; ++i) {
      y *= mu.base;
      y -= std::floor(y);
    }
    return y;
  });
  cloud.provenance = "Cesaro push-forward: " + mu.weights + " Markov measure, base " + std::to_string(mu.base) +
                     ", map '" + f.name() + "', N = " + std::to_string(N) + ", " + std::to_string(N + kSpareDigits) +
                     " digits per sample, T_a^n with n uniform in [0, N)";
  if (cloud.clamped > 0) cloud.provenance += ", clamped " + std::to_string(cloud.clamped) + " images into [0,1)";
  return cloud;
}

ScaleEntropy entropy_at_scale(const EmpiricalCloud& cloud, int depth, int base) {
  if (depth < 1 || base < 2) throw std::invalid_argument("entropy at scale: need depth >= 1 and base >= 2");
  if (depth * std::log2(static_cast<long double>(base)) > 62)
    throw std::invalid_argument("entropy at scale: a^n exceeds 2^62");
  const std::uint64_t bins = ipow(static_cast<std::uint64_t>(base), depth);
  const std::uint64_t S = cloud.points.size();
  if (S < bins)
    throw std::invalid_argument("entropy at scale: undersampled, S = " + std::to_string(S) + " < a^n = " +
                                std::to_string(bins));
  ScaleEntropy out;
  out.depth = depth;
  out.base = base;
  out.samples = S;
  out.undersampled = S < 100 * bins;
  const long double scale = depth * std::log(static_cast<long double>(base));

  auto estimate = [&](std::size_t lo, std::size_t hi, std::uint64_t* occupied, long double* plugin) {
    std::uint64_t k = 0;
    long double h = 0;
    if (bins <= kMaxHistogramBins) {
      std::vector<std::uint64_t> counts(bins, 0);
      for (std::size_t i = lo; i < hi; ++i) ++counts[cylinder_of(cloud.points[i], bins)];
      h = plugin_entropy(counts, hi - lo, &k);
    } else {
      std::vector<std::uint64_t> cells;
      cells.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i) cells.push_back(cylinder_of(cloud.points[i], bins));
      std::sort(cells.begin(), cells.end());
      std::vector<std::uint64_t> counts;
      for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        while (j < cells.size() && cells[j] == cells[i]) ++j;
        counts.push_back(j - i);
        i = j;
      }
      h = plugin_entropy(counts, hi - lo, &k);
    }
    if (occupied) *occupied = k;
    if (plugin) *plugin = h;
    return h + static_cast<long double>(k - 1) / (2.0L * static_cast<long double>(hi - lo));
  };
  out.corrected = estimate(0, S, &out.occupied, &out.plugin);
  out.dimension = out.corrected / scale;

  if (S >= kFolds) {
    std::vector<long double> dims;
    for (int f = 0; f < kFolds; ++f)
      dims.push_back(estimate(S * f / kFolds, S * (f + 1) / kFolds, nullptr, nullptr) / scale);
    long double mean = 0;
    for (auto d : dims) mean += d;
    mean /= kFolds;
    long double var = 0;
    for (auto d : dims) var += (d - mean) * (d - mean);
    var /= kFolds - 1;
    out.std_error = std::sqrt(var / kFolds);
  }
  return out;
}

std::vector<std::uint64_t> cylinder_histogram(const EmpiricalCloud& cloud, int depth, int base) {
  if (depth < 0 || base < 2 || depth * std::log2(static_cast<long double>(base)) > 26)
    throw std::invalid_argument("histogram: a^n must be at most 2^26");
  const std::uint64_t bins = ipow(static_cast<std::uint64_t>(base), depth);
  if (bins > kMaxHistogramBins) throw std::invalid_argument("histogram: too many bins");
  std::vector<std::uint64_t> h(bins, 0);
  for (long double x : cloud.points) ++h[cylinder_of(x, bins)];
  return h;
}

long double total_variation(const std::vector<std::uint64_t>& h1, const std::vector<std::uint64_t>& h2) {
  if (h1.size() != h2.size()) throw std::invalid_argument("total variation: histogram sizes differ");
  long double n1 = 0, n2 = 0;
  for (auto c : h1) n1 += c;
  for (auto c : h2) n2 += c;
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("total variation: empty histogram");
  long double tv = 0;
  for (std::size_t i = 0; i < h1.size(); ++i) tv += std::fabs(h1[i] / n1 - h2[i] / n2);
  return tv / 2;
}

CurvedProxyReport curved_proxy_experiment(const MarkovMeasure& mu, const SmoothMap& f, const CurvedProxyParams& params,
                                   EmpiricalCloud* cloud_out) {
  if (!(mu.dimension > 0) || mu.dimension > 1 + 1e-12L)
    throw std::invalid_argument("curved-map proxy: measure dimension must lie in (0, 1]");
  if (!f.piecewise_curved())
    throw std::invalid_argument("curved-map proxy: map must be piecewise curved (nonzero f'' on every piece)");
  EmpiricalCloud cloud = cesaro_pushforward_samples(mu, f, params.iterations, params.samples, params.seed);
  CurvedProxyReport rep;
  rep.s = mu.dimension;
  rep.estimate = entropy_at_scale(cloud, params.depth, mu.base);
  rep.margin = rep.estimate.dimension - rep.s;
  rep.clamped = cloud.clamped;
  rep.disclaimer = kProxyDisclaimer;
  if (cloud_out) *cloud_out = std::move(cloud);
  return rep;
}

std::string to_csv(const EmpiricalCloud& cloud) {
  std::string out = "point\n";
  char buf[64];
  for (long double x : cloud.points) {
    std::snprintf(buf, sizeof buf, "%.21Lg\n", x);
    out += buf;
  }
  return out;
}

}  // namespace adiclab
