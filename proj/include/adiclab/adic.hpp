#pragma once

// Number-theoretic primitives: a-adic fractional parts, commensurability of
// integer bases, and gap statistics of rotation orbits {n*alpha mod 1}.

#include <cstdint>
#include <vector>

namespace adiclab {

// Tolerance used for comparisons on the circle R/Z.
inline constexpr long double kCircleTol = 1e-12L;

// Reduce to [0, 1).
long double wrap01(long double v);

// min(|u - v|, 1 - |u - v|) for u, v taken mod 1.
long double circular_distance(long double u, long double v);

// Circle coordinate of the scale of s in base a: (-log_a |s|) mod 1.
struct AdicFrac {
  long double value = 0;  // in [0, 1)
  int base = 2;
};

// Throws std::domain_error for s == 0 and std::invalid_argument for a < 2.
AdicFrac adic_frac(long double s, int a);

// Same as adic_frac(s, a).value but for a real base > 1; used where the phase
// base is a parameter rather than the set's digit base.
long double adic_phase(long double s, long double base);

struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// related  <=>  log a / log b = ratio.num / ratio.den, decided exactly.
struct CommensurabilityVerdict {
  bool related = false;
  Ratio ratio;
};

CommensurabilityVerdict commensurability(std::uint64_t a, std::uint64_t b);

// Commensurability of a positive rational p/q (lowest terms) with the integer
// base a. When related, ratio = log_a(p/q) (possibly negative or zero).
CommensurabilityVerdict commensurability_rational(std::uint64_t p, std::uint64_t q,
                                                  std::uint64_t a);

// Prime factorization by trial division: (prime, exponent) pairs, ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

// Largest empty arc of {n*alpha mod 1 : 0 <= n < N}. N == 0 is invalid.
long double rotation_orbit_gap(long double alpha, std::uint64_t N);

// All circular gaps between consecutive sorted orbit points (N of them).
std::vector<long double> rotation_orbit_gaps(long double alpha, std::uint64_t N);

}  // namespace adiclab
