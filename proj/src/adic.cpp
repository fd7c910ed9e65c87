#include "adiclab/adic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace adiclab {

namespace {

// Values this close to 1 after reduction are exact integers up to log rounding.
constexpr long double kSnap = 1e-15L;

long double reduce_phase(long double v) {
  long double r = v - std::floor(v);
  if (r >= 1.0L - kSnap) r = 0.0L;
  if (r < 0.0L) r = 0.0L;
  return r;
}

}  // namespace

long double wrap01(long double v) {
  long double r = v - std::floor(v);
  return r >= 1.0L ? 0.0L : r;
}

long double circular_distance(long double u, long double v) {
  long double d = std::fabs(wrap01(u) - wrap01(v));
  return std::min(d, 1.0L - d);
}

AdicFrac adic_frac(long double s, int a) {
  if (a < 2) throw std::invalid_argument("adic_frac: base must be >= 2");
  if (s == 0.0L) throw std::domain_error("adic_frac: log of zero");
  return AdicFrac{reduce_phase(-std::log(std::fabs(s)) / std::log(static_cast<long double>(a))), a};
}

long double adic_phase(long double s, long double base) {
  if (!(base > 1.0L)) throw std::invalid_argument("adic_phase: base must be > 1");
  if (s == 0.0L) throw std::domain_error("adic_phase: log of zero");
  return reduce_phase(-std::log(std::fabs(s)) / std::log(base));
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

CommensurabilityVerdict commensurability(std::uint64_t a, std::uint64_t b) {
  if (a < 2 || b < 2) throw std::invalid_argument("commensurability: bases must be >= 2");
  const auto fa = factorize(a);
  const auto fb = factorize(b);
  CommensurabilityVerdict v;
  if (fa.size() != fb.size()) return v;
  // Exponent vectors must be proportional: ea / eb constant across primes.
  std::int64_t num = 0, den = 0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (fa[i].first != fb[i].first) return v;
    std::int64_t ea = fa[i].second, eb = fb[i].second;
    const std::int64_t g = std::gcd(ea, eb);
    ea /= g;
    eb /= g;
    if (i == 0) {
      num = ea;
      den = eb;
    } else if (ea != num || eb != den) {
      return v;
    }
  }
  // log a / log b = num / den  <=>  a^den == b^num.
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::pow;
  if (pow(cpp_int(a), static_cast<unsigned>(den)) != pow(cpp_int(b), static_cast<unsigned>(num))) {
    throw std::logic_error("commensurability: exponent check failed");
  }
  v.related = true;
  v.ratio = Ratio{num, den};
  return v;
}

CommensurabilityVerdict commensurability_rational(std::uint64_t p, std::uint64_t q,
                                                  std::uint64_t a) {
  if (p == 0 || q == 0) throw std::invalid_argument("commensurability_rational: zero term");
  if (a < 2) throw std::invalid_argument("commensurability_rational: base must be >= 2");
  const std::uint64_t g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (p == 1 && q == 1) return {true, Ratio{0, 1}};
  // In lowest terms p/q = c^w (w integer) forces one side to be 1.
  if (p != 1 && q != 1) return {};
  const bool inverted = (p == 1);
  auto v = commensurability(inverted ? q : p, a);
  if (v.related && inverted) v.ratio.num = -v.ratio.num;
  return v;
}

std::vector<long double> rotation_orbit_gaps(long double alpha, std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("rotation_orbit_gap: N must be >= 1");
  std::vector<long double> pts(N);
  const long double frac_alpha = wrap01(alpha);
  for (std::uint64_t n = 0; n < N; ++n) {
    pts[n] = wrap01(static_cast<long double>(n) * frac_alpha);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<long double> gaps(N);
  for (std::uint64_t i = 0; i + 1 < N; ++i) gaps[i] = pts[i + 1] - pts[i];
  gaps[N - 1] = 1.0L - pts[N - 1] + pts[0];
  return gaps;
}

long double rotation_orbit_gap(long double alpha, std::uint64_t N) {
  const auto gaps = rotation_orbit_gaps(alpha, N);
  return *std::max_element(gaps.begin(), gaps.end());
}

}  // namespace adiclab
