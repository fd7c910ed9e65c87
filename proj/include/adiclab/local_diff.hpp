#pragma once

// Difference sets X - X mod 1 and finite-scale local difference sets.
//
// The local difference set of X at x collects the limits of
// (-log_a |x_n - x'_n|) mod 1 over pairs x_n != x'_n converging to x. At a
// finite depth n it is approximated from depth-n cylinders:
//
//   D_k   = phases of pairs of cylinders meeting the ball B(x, a^-k) whose
//           representative distance is at least a^-(n-g),
//   F^(x) = intersection over k in [k0, n-g-1] of D_k dilated by eps.
//
// The D_k are nested (smaller balls see fewer pairs), so the innermost window
// determines the result; its distance range spans more than one full a-adic
// scale, which is what lets every phase in [0,1) be observed. The guard g
// bounds the phase error from using cylinder midpoints: relative distance
// error <= a^-g, phase error <= a^-g / ln a.

#include <cstdint>

#include "adiclab/circle_set.hpp"
#include "adiclab/digit_system.hpp"

namespace adiclab {

struct LocalDiffParams {
  int depth = 12;        // geometric depth n: windows live at scales a^-k, k < n
  int inner_scale = 6;   // k0
  int guard = 3;         // g
  long double epsilon = 4.0L / 65536;
  std::uint64_t resolution = 65536;  // M
  long double phase_base = 0;        // base of the phase map; 0 means the set's base
  bool circle = true;                // false: balls and distances on the real line, no wraparound
  long double scale = 1;             // ball radii and guard distance are multiplied by this

  // k0 + g < n, k0 >= 0, g >= 1, eps >= 2/M. Throws std::invalid_argument.
  void validate() const;
  std::uint64_t dilation_cells() const;
  // Depth 12 for base 3, 14 for base 2, M = 2^16, g = 3, k0 = n - g - 3.
  static LocalDiffParams defaults(int base);
  static LocalDiffParams with_depth(int base, int depth, std::uint64_t resolution);
};

// Pair-enumeration cap; ADICLAB_MAX_PAIRS overrides the default of 1e9.
std::uint64_t max_pairs();

// Outer approximation of X - X mod 1 from a cover: every cylinder pair
// contributes the arc of possible differences, then one cell of dilation.
// Covers of finite sets use their exact members instead.
CircleSet difference_set(const Cover& cover, std::uint64_t M);

// Local difference set at the circle point x. `cover.depth` fixes the
// cylinder grid; `p.depth` fixes the windows (they differ for image covers).
CircleSet local_difference_set(const Cover& cover, long double x, const LocalDiffParams& p);
// Throws std::domain_error if x is not admissible in sys.
CircleSet local_difference_set(const DigitSystem& sys, const PointSpec& x, const LocalDiffParams& p);

// Canonical points of all depth-m cylinders, in cylinder order.
std::vector<PointSpec> net_points(const DigitSystem& sys, int m);

// Union of local difference sets over the depth-m net.
CircleSet aggregate_local_difference_set(const DigitSystem& sys, const LocalDiffParams& p, int net_depth = 4);
CircleSet aggregate_local_difference_set(const Cover& cover, std::span<const long double> points,
                                         const LocalDiffParams& p);

struct RestrictedVerdict {
  bool restricted = false;  // an empty cell proves X - X != [0,1] mod 1
  long double gap = 0;
};

RestrictedVerdict self_restricted_test(const DigitSystem& sys, int depth, std::uint64_t M);

}  // namespace adiclab
