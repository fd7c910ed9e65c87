#pragma once

// Piecewise elementary maps with closed-form derivatives, and outward
// interval images of covers.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "adiclab/digit_system.hpp"

namespace adiclab {

enum class MapKind { affine, poly, moebius };

// coeffs: affine {r, t} -> r x + t; poly {c0..c4} -> sum c_i x^i;
// moebius {alpha, beta, gamma, delta} -> (alpha x + beta) / (gamma x + delta).
struct MapPiece {
  Interval domain;
  MapKind kind = MapKind::affine;
  std::array<long double, 5> coeffs{};
  int curvature = 0;  // sign of f'' on the piece, filled in on construction

  long double value(long double x) const;
  long double derivative(long double x) const;
  long double second_derivative(long double x) const;
  // sup |f''| over [lo, hi] (closed form per kind).
  long double second_derivative_bound(long double lo, long double hi) const;
};

struct MapValue {
  long double value = 0;
  long double derivative = 0;
};

class SmoothMap {
 public:
  // Validates: pieces ordered with disjoint interiors, f' != 0 and f'' of
  // constant sign on a 100-point interior grid of each piece, no Moebius pole.
  explicit SmoothMap(std::vector<MapPiece> pieces, std::string name = {});

  static SmoothMap affine(long double r, long double t, Interval domain = {0, 1});
  static SmoothMap polynomial(std::vector<long double> coeffs, Interval domain = {0, 1});
  static SmoothMap moebius(long double alpha, long double beta, long double gamma, long double delta,
                           Interval domain = {0, 1});
  static SmoothMap identity() { return affine(1, 0); }

  const std::vector<MapPiece>& pieces() const { return pieces_; }
  const std::string& name() const { return name_; }
  // Interior piece boundaries (the exceptional set E).
  std::vector<long double> breakpoints() const;
  // True when every piece has nonzero curvature.
  bool piecewise_curved() const;
  bool is_identity() const;

  // Throws std::domain_error for x in E or outside every piece.
  MapValue eval(long double x) const;
  long double second_derivative(long double x) const;
  // Piece whose closed domain contains [lo, hi]; SplitRequired when the
  // interval crosses a breakpoint, std::domain_error when outside the domain.
  const MapPiece& piece_for(long double lo, long double hi) const;

 private:
  std::vector<MapPiece> pieces_;
  std::string name_;
};

SmoothMap parse_map(std::string_view text);
SmoothMap load_map(const std::string& path);

// Image of every cover interval: endpoint images of the monotone piece,
// widened outward by sup|f''| len^2 / 8 plus rounding slack for nonaffine
// pieces. The result keeps base and depth of the input and is not adic.
Cover image_cover(const Cover& c, const SmoothMap& f);

}  // namespace adiclab
