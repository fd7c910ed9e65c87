#include "adiclab/circle_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "adiclab/adic.hpp"
#include "adiclab/errors.hpp"

namespace adiclab {

namespace {

std::uint64_t mod_cells(std::int64_t k, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((k % mm) + mm) % mm);
}

// dist[i] = circular cell distance from i to the nearest marked cell.
std::vector<std::uint64_t> nearest_marked(const CircleSet& s) {
  const std::uint64_t m = s.resolution();
  constexpr auto kInf = std::numeric_limits<std::uint64_t>::max() / 4;
  std::vector<std::uint64_t> dist(m, kInf);
  std::uint64_t last = kInf;
  for (std::uint64_t pass = 0; pass < 2 * m; ++pass) {
    const std::uint64_t i = pass % m;
    if (s.test(i)) last = pass;
    if (last != kInf) dist[i] = std::min(dist[i], pass - last);
  }
  last = kInf;
  for (std::uint64_t pass = 2 * m; pass-- > 0;) {
    const std::uint64_t i = pass % m;
    if (s.test(i)) last = pass;
    if (last != kInf) dist[i] = std::min(dist[i], last - pass);
  }
  return dist;
}

}  // namespace

CircleSet::CircleSet(std::uint64_t resolution) : m_(resolution) {
  if (resolution < 2) throw std::invalid_argument("circle set: resolution must be >= 2");
  if (resolution > kMaxResolution) throw std::invalid_argument("circle set: resolution exceeds 2^24");
  words_.assign((resolution + 63) / 64, 0);
}

CircleSet CircleSet::full(std::uint64_t resolution) { return CircleSet(resolution).complement(); }

void CircleSet::trim() {
  if (m_ % 64) words_.back() &= (std::uint64_t{1} << (m_ % 64)) - 1;
}

void CircleSet::set_run(std::int64_t lo, std::uint64_t len) {
  if (len >= m_) {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    trim();
    return;
  }
  // Fills [first, last) within one turn of the circle.
  auto fill = [&](std::uint64_t first, std::uint64_t last) {
    while (first < last && (first & 63) != 0) set(first++);
    while (first + 64 <= last) {
      words_[first >> 6] = ~std::uint64_t{0};
      first += 64;
    }
    while (first < last) set(first++);
  };
  const std::uint64_t c = mod_cells(lo, m_);
  const std::uint64_t end = c + len;
  if (end <= m_) {
    fill(c, end);
  } else {
    fill(c, m_);
    fill(0, end - m_);
  }
}

std::uint64_t CircleSet::cell_of(long double v) const {
  const long double w = wrap01(v);
  auto c = static_cast<std::uint64_t>(std::floor(w * static_cast<long double>(m_)));
  return std::min(c, m_ - 1);
}

std::uint64_t CircleSet::count() const {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

bool CircleSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::uint64_t> CircleSet::cells() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

CircleSet& CircleSet::operator|=(const CircleSet& o) {
  if (o.m_ != m_) throw std::invalid_argument("circle set: resolution mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

CircleSet& CircleSet::operator&=(const CircleSet& o) {
  if (o.m_ != m_) throw std::invalid_argument("circle set: resolution mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

CircleSet operator|(CircleSet a, const CircleSet& b) { return a |= b; }
CircleSet operator&(CircleSet a, const CircleSet& b) { return a &= b; }

CircleSet CircleSet::complement() const {
  CircleSet out(*this);
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

CircleSet CircleSet::dilate(std::uint64_t k) const {
  if (k == 0) return *this;
  CircleSet out(m_);
  if (2 * k + 1 >= m_) return empty() ? out : full(m_);
  for (auto c : cells()) out.set_run(static_cast<std::int64_t>(c) - static_cast<std::int64_t>(k), 2 * k + 1);
  return out;
}

CircleSet CircleSet::shift_cells(std::int64_t k) const {
  CircleSet out(m_);
  const std::uint64_t s = mod_cells(k, m_);
  for (auto c : cells()) out.set((c + s) % m_);
  return out;
}

CircleSet CircleSet::rotate(long double t) const {
  return shift_cells(static_cast<std::int64_t>(std::llround(t * static_cast<long double>(m_))));
}

long double CircleSet::max_gap() const {
  if (empty()) return 1.0L;
  const auto marked = cells();
  std::uint64_t best = 0;
  for (std::size_t i = 0; i + 1 < marked.size(); ++i) best = std::max(best, marked[i + 1] - marked[i] - 1);
  best = std::max(best, m_ - marked.back() - 1 + marked.front());
  return static_cast<long double>(best) / static_cast<long double>(m_);
}

bool CircleSet::subset_of(const CircleSet& o) const {
  if (o.m_ != m_) throw std::invalid_argument("circle set: resolution mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

CircleSet rasterize_points(std::span<const long double> points, std::uint64_t M) {
  CircleSet s(M);
  for (long double p : points) s.set(s.cell_of(p));
  return s;
}

CircleSet rasterize_intervals(std::span<const Interval> arcs, std::uint64_t M) {
  CircleSet s(M);
  const long double m = static_cast<long double>(M);
  for (const auto& iv : arcs) {
    if (iv.hi - iv.lo >= 1.0L) return CircleSet::full(M);
    const long double lo = wrap01(iv.lo), hi = wrap01(iv.hi);
    const auto first = static_cast<std::int64_t>(std::floor(lo * m));
    auto last = static_cast<std::int64_t>(std::floor(hi * m));
    if (lo > hi) last += static_cast<std::int64_t>(M);
    s.set_run(first, static_cast<std::uint64_t>(last - first + 1));
  }
  return s;
}

long double hausdorff_distance(const CircleSet& a, const CircleSet& b) {
  if (a.resolution() != b.resolution()) throw std::domain_error("hausdorff_distance: resolution mismatch");
  if (a.empty() || b.empty()) throw std::domain_error("hausdorff_distance: empty operand");
  const auto db = nearest_marked(b);
  const auto da = nearest_marked(a);
  std::uint64_t worst = 0;
  for (auto c : a.cells()) worst = std::max(worst, db[c]);
  for (auto c : b.cells()) worst = std::max(worst, da[c]);
  return static_cast<long double>(worst) / static_cast<long double>(a.resolution());
}

std::string to_dump(const CircleSet& s) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::ostringstream out;
  out << "circleset " << s.resolution() << ' ' << s.count() << '\n';
  const std::uint64_t bytes = (s.resolution() + 7) / 8;
  for (std::uint64_t k = 0; k < bytes; ++k) {
    unsigned byte = 0;
    for (unsigned j = 0; j < 8; ++j) {
      const std::uint64_t c = 8 * k + j;
      if (c < s.resolution() && s.test(c)) byte |= 1u << j;
    }
    out << kHex[byte >> 4] << kHex[byte & 15];
    if (k % 32 == 31 || k + 1 == bytes) out << '\n';
  }
  return out.str();
}

CircleSet from_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tag;
  std::uint64_t m = 0, count = 0;
  if (!(in >> tag >> m >> count) || tag != "circleset") throw ParseError("circle set dump: bad header", 1, 1);
  CircleSet s(m);
  std::string line, hex;
  while (in >> line) hex += line;
  if (hex.size() != 2 * ((m + 7) / 8)) throw ParseError("circle set dump: wrong payload length");
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    throw ParseError("circle set dump: bad hex digit");
  };
  for (std::uint64_t k = 0; 2 * k < hex.size(); ++k) {
    const unsigned byte = nibble(hex[2 * k]) << 4 | nibble(hex[2 * k + 1]);
    for (unsigned j = 0; j < 8; ++j)
      if (byte >> j & 1u) {
        if (8 * k + j >= m) throw ParseError("circle set dump: bit beyond resolution");
        s.set(8 * k + j);
      }
  }
  if (s.count() != count) throw ParseError("circle set dump: count mismatch");
  return s;
}

std::string to_csv(const CircleSet& s) {
  std::ostringstream out;
  out.precision(17);
  out << "cell,midpoint\n";
  for (auto c : s.cells()) out << c << ',' << static_cast<double>(s.cell_midpoint(c)) << '\n';
  return out.str();
}

}  // namespace adiclab
