#pragma once

// Finite-resolution subsets of R/Z: M equal arcs, cell i = [i/M, (i+1)/M).

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adiclab/digit_system.hpp"

namespace adiclab {

inline constexpr std::uint64_t kMaxResolution = std::uint64_t{1} << 24;

class CircleSet {
 public:
  // Throws std::invalid_argument for M < 2 or M > 2^24.
  explicit CircleSet(std::uint64_t resolution);

  static CircleSet full(std::uint64_t resolution);

  std::uint64_t resolution() const { return m_; }
  bool test(std::uint64_t cell) const { return (words_[cell >> 6] >> (cell & 63)) & 1u; }
  void set(std::uint64_t cell) { words_[cell >> 6] |= std::uint64_t{1} << (cell & 63); }
  void reset(std::uint64_t cell) { words_[cell >> 6] &= ~(std::uint64_t{1} << (cell & 63)); }
  // Marks cells lo, lo+1, ..., lo+len-1 (mod M).
  void set_run(std::int64_t lo, std::uint64_t len);
  // Cell containing the circle point v (half-open convention).
  std::uint64_t cell_of(long double v) const;
  long double cell_midpoint(std::uint64_t cell) const {
    return (static_cast<long double>(cell) + 0.5L) / static_cast<long double>(m_);
  }

  std::uint64_t count() const;
  bool empty() const;
  bool is_full() const { return count() == m_; }
  std::vector<std::uint64_t> cells() const;

  CircleSet& operator|=(const CircleSet& o);
  CircleSet& operator&=(const CircleSet& o);
  CircleSet complement() const;
  // Every cell within `cells` of a marked cell becomes marked.
  CircleSet dilate(std::uint64_t cells) const;
  // Circular shift by k cells.
  CircleSet shift_cells(std::int64_t k) const;
  // Rotation by t: circular shift by round(t M) cells.
  CircleSet rotate(long double t) const;
  // Longest run of empty cells over M; 1 for the empty set.
  long double max_gap() const;
  bool subset_of(const CircleSet& o) const;

  friend bool operator==(const CircleSet& a, const CircleSet& b) { return a.m_ == b.m_ && a.words_ == b.words_; }

 private:
  void trim();

  std::uint64_t m_;
  std::vector<std::uint64_t> words_;
};

CircleSet operator|(CircleSet a, const CircleSet& b);
CircleSet operator&(CircleSet a, const CircleSet& b);

// Marks the cell of every point (points reduced mod 1).
CircleSet rasterize_points(std::span<const long double> points, std::uint64_t M);
// Marks every cell meeting a closed arc; an interval with lo > hi wraps past 1.
CircleSet rasterize_intervals(std::span<const Interval> arcs, std::uint64_t M);

// Circular Hausdorff distance at cell granularity. Both operands must be
// nonempty with equal resolution (std::domain_error otherwise).
long double hausdorff_distance(const CircleSet& a, const CircleSet& b);

// Text dump: "circleset <M> <count>" then the bit array as lowercase hex, one
// byte per cell octet (cell 8k+j is bit j of byte k), 32 bytes per line.
std::string to_dump(const CircleSet& s);
CircleSet from_dump(std::string_view text);
// "cell,midpoint" rows for marked cells.
std::string to_csv(const CircleSet& s);

}  // namespace adiclab
