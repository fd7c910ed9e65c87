#include "adiclab/smooth_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "adiclab/errors.hpp"

namespace adiclab {

namespace {

constexpr int kGridPoints = 100;
constexpr long double kDomainSlack = 1e-15L;

long double rounding_slack(long double v) {
  return 8 * std::numeric_limits<long double>::epsilon() * std::max(1.0L, std::fabs(v));
}

}  // namespace

long double MapPiece::value(long double x) const {
  const auto& c = coeffs;
  switch (kind) {
    case MapKind::affine:
      return c[0] * x + c[1];
    case MapKind::poly:
      return (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0];
    case MapKind::moebius:
      return (c[0] * x + c[1]) / (c[2] * x + c[3]);
  }
  return 0;
}

long double MapPiece::derivative(long double x) const {
  const auto& c = coeffs;
  switch (kind) {
    case MapKind::affine:
      return c[0];
    case MapKind::poly:
      return ((4 * c[4] * x + 3 * c[3]) * x + 2 * c[2]) * x + c[1];
    case MapKind::moebius: {
      const long double den = c[2] * x + c[3];
      return (c[0] * c[3] - c[1] * c[2]) / (den * den);
    }
  }
  return 0;
}

long double MapPiece::second_derivative(long double x) const {
  const auto& c = coeffs;
  switch (kind) {
    case MapKind::affine:
      return 0;
    case MapKind::poly:
      return (12 * c[4] * x + 6 * c[3]) * x + 2 * c[2];
    case MapKind::moebius: {
      const long double den = c[2] * x + c[3];
      return -2 * c[2] * (c[0] * c[3] - c[1] * c[2]) / (den * den * den);
    }
  }
  return 0;
}

long double MapPiece::second_derivative_bound(long double lo, long double hi) const {
  long double b = std::max(std::fabs(second_derivative(lo)), std::fabs(second_derivative(hi)));
  if (kind == MapKind::poly && coeffs[4] != 0) {
    // f'' is quadratic; its vertex may be interior.
    const long double vertex = -6 * coeffs[3] / (24 * coeffs[4]);
    if (vertex > lo && vertex < hi) b = std::max(b, std::fabs(second_derivative(vertex)));
  }
  return b;
}

SmoothMap::SmoothMap(std::vector<MapPiece> pieces, std::string name)
    : pieces_(std::move(pieces)), name_(std::move(name)) {
  if (pieces_.empty()) throw std::invalid_argument("smooth map: no pieces");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const MapPiece& a, const MapPiece& b) { return a.domain.lo < b.domain.lo; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto& p = pieces_[i];
    if (!(p.domain.lo < p.domain.hi)) throw std::invalid_argument("smooth map: empty piece domain");
    if (i > 0 && p.domain.lo < pieces_[i - 1].domain.hi)
      throw std::invalid_argument("smooth map: piece domains overlap");
    if (p.kind == MapKind::moebius) {
      const long double d_lo = p.coeffs[2] * p.domain.lo + p.coeffs[3];
      const long double d_hi = p.coeffs[2] * p.domain.hi + p.coeffs[3];
      if (d_lo == 0 || d_hi == 0 || (d_lo < 0) != (d_hi < 0))
        throw std::invalid_argument("smooth map: Moebius pole inside piece domain");
    }
    int deriv_sign = 0;
    int positive = 0, negative = 0;
    for (int k = 0; k < kGridPoints; ++k) {
      const long double x = p.domain.lo + (k + 0.5L) / kGridPoints * p.domain.length();
      const long double d = p.derivative(x);
      if (d == 0) throw std::invalid_argument("smooth map: f' vanishes inside a piece");
      const int ds = d > 0 ? 1 : -1;
      if (deriv_sign != 0 && ds != deriv_sign) throw std::invalid_argument("smooth map: f' changes sign inside a piece");
      deriv_sign = ds;
      const long double s = p.second_derivative(x);
      positive += s > 0;
      negative += s < 0;
    }
    int curv_sign = 0;
    if (positive == kGridPoints) {
      curv_sign = 1;
    } else if (negative == kGridPoints) {
      curv_sign = -1;
    } else if (positive + negative > 0) {
      throw std::invalid_argument("smooth map: f'' is not of constant sign inside a piece; split it");
    }
    p.curvature = curv_sign;
  }
}

SmoothMap SmoothMap::affine(long double r, long double t, Interval domain) {
  MapPiece p;
  p.domain = domain;
  p.kind = MapKind::affine;
  p.coeffs = {r, t, 0, 0, 0};
  return SmoothMap({p}, "affine");
}

SmoothMap SmoothMap::polynomial(std::vector<long double> coeffs, Interval domain) {
  if (coeffs.size() > 5) throw std::invalid_argument("smooth map: polynomial degree must be <= 4");
  MapPiece p;
  p.domain = domain;
  p.kind = MapKind::poly;
  std::copy(coeffs.begin(), coeffs.end(), p.coeffs.begin());
  return SmoothMap({p}, "poly");
}

SmoothMap SmoothMap::moebius(long double alpha, long double beta, long double gamma, long double delta,
                             Interval domain) {
  MapPiece p;
  p.domain = domain;
  p.kind = MapKind::moebius;
  p.coeffs = {alpha, beta, gamma, delta, 0};
  return SmoothMap({p}, "moebius");
}

std::vector<long double> SmoothMap::breakpoints() const {
  std::vector<long double> e;
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    e.push_back(pieces_[i].domain.hi);
    if (pieces_[i + 1].domain.lo != pieces_[i].domain.hi) e.push_back(pieces_[i + 1].domain.lo);
  }
  return e;
}

bool SmoothMap::piecewise_curved() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const MapPiece& p) { return p.curvature != 0; });
}

bool SmoothMap::is_identity() const {
  return pieces_.size() == 1 && pieces_[0].kind == MapKind::affine && pieces_[0].coeffs[0] == 1 &&
         pieces_[0].coeffs[1] == 0;
}

MapValue SmoothMap::eval(long double x) const {
  for (long double e : breakpoints())
    if (x == e) throw std::domain_error("smooth map: point is a breakpoint");
  for (const auto& p : pieces_)
    if (x >= p.domain.lo && x <= p.domain.hi) return {p.value(x), p.derivative(x)};
  throw std::domain_error("smooth map: point outside every piece");
}

long double SmoothMap::second_derivative(long double x) const {
  for (const auto& p : pieces_)
    if (x >= p.domain.lo && x <= p.domain.hi) return p.second_derivative(x);
  throw std::domain_error("smooth map: point outside every piece");
}

const MapPiece& SmoothMap::piece_for(long double lo, long double hi) const {
  for (const auto& p : pieces_)
    if (lo >= p.domain.lo - kDomainSlack && hi <= p.domain.hi + kDomainSlack) return p;
  for (long double e : breakpoints())
    if (lo < e && hi > e) throw SplitRequired("split required: interval crosses a map breakpoint");
  throw std::domain_error("smooth map: interval outside the map domain");
}

Cover image_cover(const Cover& c, const SmoothMap& f) {
  Cover out;
  out.base = c.base;
  out.depth = c.depth;
  out.adic = false;
  out.intervals.reserve(c.intervals.size());
  std::vector<std::uint8_t> exact;  // image computed without widening
  for (const auto& iv : c.intervals) {
    const MapPiece& p = f.piece_for(iv.lo, iv.hi);
    exact.push_back(p.kind == MapKind::affine ? 1 : 0);
    const long double lo = std::clamp(iv.lo, p.domain.lo, p.domain.hi);
    const long double hi = std::clamp(iv.hi, p.domain.lo, p.domain.hi);
    const long double y0 = p.value(lo), y1 = p.value(hi);
    Interval img{std::min(y0, y1), std::max(y0, y1)};
    if (p.kind != MapKind::affine) {
      const long double len = hi - lo;
      const long double w = p.second_derivative_bound(lo, hi) * len * len / 8;
      img.lo -= w + rounding_slack(img.lo);
      img.hi += w + rounding_slack(img.hi);
    }
    out.intervals.push_back(img);
  }
  // Sort by left end; exact images of solid intervals stay solid.
  std::vector<std::size_t> order(out.intervals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return out.intervals[i].lo < out.intervals[j].lo; });
  std::vector<Interval> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) {
    sorted.push_back(out.intervals[i]);
    if (c.solid.size() == c.intervals.size()) out.solid.push_back(c.solid[i] && exact[i] ? 1 : 0);
  }
  out.intervals = std::move(sorted);
  for (long double x : c.points) out.points.push_back(f.eval(x).value);
  std::sort(out.points.begin(), out.points.end());
  return out;
}

SmoothMap parse_map(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("malformed map definition: ") + e.what(), line, col);
  }
  if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array())
    throw ParseError("map definition needs a 'pieces' array");
  std::vector<MapPiece> pieces;
  for (const auto& jp : doc["pieces"]) {
    if (!jp.is_object()) throw ParseError("each piece must be an object");
    MapPiece p;
    if (!jp.contains("domain") || !jp["domain"].is_array() || jp["domain"].size() != 2)
      throw ParseError("piece needs 'domain': [lo, hi]");
    p.domain = {jp["domain"][0].get<long double>(), jp["domain"][1].get<long double>()};
    const std::string kind = jp.value("kind", std::string{});
    if (!jp.contains("coeffs") || !jp["coeffs"].is_array()) throw ParseError("piece needs a 'coeffs' array");
    std::vector<long double> cs;
    for (const auto& v : jp["coeffs"]) {
      if (!v.is_number()) throw ParseError("coefficients must be numbers");
      cs.push_back(v.get<long double>());
    }
    std::size_t expected = 0;
    if (kind == "affine") {
      p.kind = MapKind::affine;
      expected = 2;
    } else if (kind == "poly") {
      p.kind = MapKind::poly;
      if (cs.empty() || cs.size() > 5) throw ParseError("poly needs 1 to 5 coefficients");
      expected = cs.size();
    } else if (kind == "moebius") {
      p.kind = MapKind::moebius;
      expected = 4;
    } else {
      throw ParseError("piece 'kind' must be affine, poly or moebius");
    }
    if (cs.size() != expected) throw ParseError("wrong number of coefficients for kind '" + kind + "'");
    std::copy(cs.begin(), cs.end(), p.coeffs.begin());
    pieces.push_back(p);
  }
  try {
    return SmoothMap(std::move(pieces), doc.value("name", std::string{}));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid map: ") + e.what());
  }
}

SmoothMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open map definition: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_map(ss.str());
}

}  // namespace adiclab
