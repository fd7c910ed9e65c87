#pragma once

// Verification experiments built on local difference sets: transformation
// laws under smooth maps, density of the aggregate set for non-commensurable
// bases, the dimension inequality for images, and the affine self-embedding
// search.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adiclab/adic.hpp"
#include "adiclab/circle_set.hpp"
#include "adiclab/digit_system.hpp"
#include "adiclab/local_diff.hpp"
#include "adiclab/smooth_map.hpp"

namespace adiclab {

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct TransformReport {
  long double shift_predicted = 0;  // (-log_a |f'(x)|) mod 1
  long double distance = 0;         // Hausdorff distance, observed vs predicted
  int depth = 0;
  std::uint64_t resolution = 0;
  long double tolerance = 0;
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t observed_cells = 0;
  std::uint64_t predicted_cells = 0;
};

// Compares the local difference set of f(X) at f(x) with the local difference
// set of X at x rotated by the predicted shift. Both sides are computed on the
// real line (no wraparound through 0) and the image windows are scaled by
// |f'(x)|, so both sides see corresponding pairs.
TransformReport verify_transform_law(const DigitSystem& sys, const SmoothMap& f, const PointSpec& x,
                                     const LocalDiffParams& p, long double tol);

// Box-counting slope of a circle set over 2^j boxes, j in [3, log2(M) - 3].
DimensionEstimate circle_box_dimension(const CircleSet& s);

struct GapRow {
  int depth = 0;
  long double gap = 0;             // aggregate at this depth alone
  std::uint64_t marked = 0;
  long double cumulative_gap = 0;  // union of aggregates over all depths in [first, depth]
};

struct MechanismRow {
  int iterate = 0;           // n in T_a^n x0
  long double rotation = 0;  // -n log_b a mod 1
  bool contained = false;    // rotated F^_D(x0) within 2 cells of F^_{D-n}(T_a^n x0)
  std::uint64_t missing = 0;
};

struct FullCircleReport {
  int base = 0;
  int b = 0;
  bool vacuous = false;  // finite X: the hypothesis "infinite" fails
  std::vector<GapRow> rows;
  bool non_increasing = false;
  std::vector<MechanismRow> mechanism;
  bool mechanism_ok = false;
  std::optional<PointSpec> x0;
};

// Each further a-adic scale contributes a copy of the local set rotated by
// -log_b a, so the trend is read off the cumulative union over depths.
// Throws std::invalid_argument when a ~ b.
FullCircleReport claim_full_circle(const DigitSystem& sys, int b, const std::vector<int>& depths, std::uint64_t M,
                                   int net_depth = 4);

struct DimRow {
  int depth = 0;
  long double dim_fx = 0;  // box dimension of F^_b(X)
  long double dim_fy = 0;  // box dimension of F^_b(f X)
  bool usable = false;
};

struct MapDimReport {
  std::vector<DimRow> rows;
  long double bdim_x = 0;
  long double dim_fx = 0;
  long double dim_fy = 0;
  long double slack = 0.05L;
  bool holds = false;
  Verdict verdict = Verdict::inconclusive;
};

MapDimReport check_map_dim_inequality(const DigitSystem& sys, const SmoothMap& f, int b,
                                      const std::vector<int>& depths, std::uint64_t M, int net_depth = 4);

struct AffineResult {
  Ratio r;
  long double t = 0;
  bool passes = false;
  int refuted_at = 0;  // smallest depth where containment failed; 0 if it passes
  bool exact = false;  // r handled as an exact rational
  bool commensurable = false;
  Ratio log_ratio;                // log_a |r| when commensurable
  long double grid_distance = 0;  // for inexact r: distance of log_a|r| to {p/q : q <= 16}
};

// (r, t) passes when the image of every depth-d cylinder lies in the
// one-cylinder dilation of the depth-d cover for all d <= depth. Passing only
// fails to refute f(X) in X. Results are ordered r-major, t-minor.
std::vector<AffineResult> affine_embedding_search(const DigitSystem& sys, const std::vector<Ratio>& r_grid,
                                                  const std::vector<long double>& t_grid, int depth);

// All reduced p/q with 1 <= q <= max_den and 0 < |p/q| <= max_abs, both signs,
// ascending by value.
std::vector<Ratio> rational_grid(int max_den, long double max_abs);

struct InclusionReport {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> violating_cells;  // first few
};

// For every marked t of the aggregate F^_b(X), b^-t must lie within 2 cells of
// the computed difference set X - X.
InclusionReport check_inclusion_prop(const DigitSystem& sys, int b, const LocalDiffParams& p, int diff_depth,
                                     int net_depth = 4);

}  // namespace adiclab
