#pragma once

// Closed T_a-invariant subsets of [0,1] given symbolically: the set of points
// whose base-a expansion is an infinite path in a finite automaton.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adiclab {

struct Edge {
  int from = 0;
  int digit = 0;
  int to = 0;
};

// Deterministic, pruned automaton over digits {0..base-1}. Every state is
// reachable from the start state and has at least one outgoing edge, so the
// length-n words read from the start state are exactly the length-n prefixes
// of admissible sequences.
class DigitSystem {
 public:
  // Word-tracking construction: states are the proper prefixes of forbidden
  // words, a transition is dropped when it completes a forbidden word.
  static DigitSystem from_forbidden_words(int base, const std::vector<std::vector<int>>& words,
                                          std::string name = {});
  // Arbitrary (possibly nondeterministic) automaton; determinized and pruned.
  static DigitSystem from_automaton(int base, int num_states, const std::vector<int>& start,
                                    const std::vector<Edge>& edges, std::string name = {});

  int base() const { return base_; }
  int num_states() const { return num_states_; }
  int start() const { return start_; }
  const std::string& name() const { return name_; }

  // -1 when the transition does not exist.
  int next(int state, int digit) const { return next_[static_cast<std::size_t>(state) * base_ + digit]; }
  int out_degree(int state) const;
  std::vector<Edge> edges() const;

 private:
  DigitSystem(int base, int num_states, int start, std::vector<int> next, std::string name);

  int base_ = 2;
  int num_states_ = 0;
  int start_ = 0;
  std::vector<int> next_;
  std::string name_;
};

// Parses a set-definition document (JSON). Throws ParseError with line and
// column on malformed input, EmptySetError when nothing survives pruning.
DigitSystem parse_system(std::string_view text);
DigitSystem load_system(const std::string& path);

// Eventually periodic sequence preperiod . period^infinity.
struct PointSpec {
  std::vector<int> preperiod;
  std::vector<int> period;
};

long double point_value(const PointSpec& p, int base);
bool is_admissible(const DigitSystem& sys, const PointSpec& p);
// Image of the point under T_a (drops the leading digit).
PointSpec shift_point(const PointSpec& p);
// Admissible point in the cylinder of `word`: the word followed by the
// lexicographically least admissible continuation.
PointSpec canonical_point(const DigitSystem& sys, const std::vector<int>& word);

struct Interval {
  long double lo = 0;
  long double hi = 0;
  long double mid() const { return (lo + hi) / 2; }
  long double length() const { return hi - lo; }
};

// Finite family of closed intervals covering a set. Adic covers list depth-n
// cylinders [j a^-n, (j+1) a^-n] and keep the integer indices j in `cells`.
// When the underlying set is finite its exact members are kept in `points`.
struct Cover {
  int base = 2;
  int depth = 0;
  bool adic = false;
  std::vector<Interval> intervals;
  std::vector<std::uint64_t> cells;
  std::vector<long double> points;
  // solid[i] != 0 when interval i lies entirely inside the set.
  std::vector<std::uint8_t> solid;
};

inline constexpr std::uint64_t kMaxCylinders = 100'000'000;

// States from which every digit sequence is admissible.
std::vector<bool> universal_states(const DigitSystem& sys);

// Number of admissible words of length 0..n_max.

std::vector<long double> word_counts(const DigitSystem& sys, int n_max);
Cover cover_at_depth(const DigitSystem& sys, int n);
std::vector<std::vector<int>> admissible_words(const DigitSystem& sys, int n);

struct EntropyResult {
  long double perron = 0;  // spectral radius of the adjacency matrix
  long double h = 0;       // topological entropy, log(perron)
  long double dim = 0;     // h / log a
};

EntropyResult entropy_exact(const DigitSystem& sys);

// Spectral radius and right Perron vector of the adjacency matrix restricted
// to `states` (which must induce a strongly connected subgraph).
struct PerronResult {
  long double value = 0;
  std::vector<long double> vector;  // indexed like `states`, max entry 1
};
PerronResult perron(const DigitSystem& sys, std::span<const int> states);

// Strongly connected components that contain a cycle, each sorted ascending;
// components are ordered by their smallest state.
std::vector<std::vector<int>> cyclic_components(const DigitSystem& sys);

struct Classification {
  bool finite = false;
  bool perfect = false;
  bool transitive = false;
};

Classification classify(const DigitSystem& sys);

// Exact members of a finite system. Throws std::domain_error otherwise.
std::vector<long double> finite_points(const DigitSystem& sys);

struct DimensionEstimate {
  std::map<int, long double> counts;
  long double slope = 0;
  std::optional<long double> exact;
  long double residual = 0;  // root-mean-square regression residual
};

// Least-squares slope of log(count) against n log a.
DimensionEstimate box_count_estimate(const std::map<int, long double>& counts, int base);

}  // namespace adiclab
