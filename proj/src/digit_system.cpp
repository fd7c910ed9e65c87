#include "adiclab/digit_system.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "adiclab/errors.hpp"

namespace adiclab {

namespace {

constexpr std::size_t kMaxDfaStates = 100'000;

// Determinizes and prunes an automaton given as an edge list with a start set.
DigitSystem build_system(int base, int num_states, const std::vector<int>& start,
                         const std::vector<Edge>& edges, std::string name,
                         const std::function<DigitSystem(int, int, int, std::vector<int>, std::string)>& make) {
  // Live NFA states: those with an infinite forward path.
  std::vector<std::vector<Edge>> out(num_states);
  for (const auto& e : edges) out[e.from].push_back(e);
  std::vector<char> live(num_states, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < num_states; ++s) {
      if (!live[s]) continue;
      const bool any = std::any_of(out[s].begin(), out[s].end(), [&](const Edge& e) { return live[e.to]; });
      if (!any) {
        live[s] = 0;
        changed = true;
      }
    }
  }

  std::vector<int> init;
  for (int s : start)
    if (live[s]) init.push_back(s);
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());
  if (init.empty()) throw EmptySetError("empty set: no infinite admissible sequence");

  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  std::vector<int> next;
  std::queue<int> work;
  auto intern = [&](std::vector<int> subset) {
    auto [it, inserted] = ids.emplace(subset, static_cast<int>(subsets.size()));
    if (inserted) {
      if (subsets.size() >= kMaxDfaStates) throw DepthTooLarge("automaton too large after determinization");
      subsets.push_back(std::move(subset));
      next.resize(subsets.size() * base, -1);
      work.push(it->second);
    }
    return it->second;
  };
  intern(init);
  while (!work.empty()) {
    const int id = work.front();
    work.pop();
    for (int d = 0; d < base; ++d) {
      std::vector<int> target;
      for (int s : subsets[id])
        for (const auto& e : out[s])
          if (e.digit == d && live[e.to]) target.push_back(e.to);
      if (target.empty()) continue;
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
      const int t = intern(std::move(target));
      next[static_cast<std::size_t>(id) * base + d] = t;
    }
  }
  return make(base, static_cast<int>(subsets.size()), 0, std::move(next), std::move(name));
}

int digit_from_char(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<int> parse_word(const nlohmann::json& w, int base) {
  std::vector<int> word;
  if (w.is_string()) {
    for (char c : w.get<std::string>()) {
      const int d = digit_from_char(c);
      if (d < 0 || d >= base) throw ParseError("digit '" + std::string(1, c) + "' out of range for base " + std::to_string(base));
      word.push_back(d);
    }
  } else if (w.is_array()) {
    for (const auto& v : w) {
      if (!v.is_number_integer()) throw ParseError("word entries must be integers");
      const int d = v.get<int>();
      if (d < 0 || d >= base) throw ParseError("digit " + std::to_string(d) + " out of range for base " + std::to_string(base));
      word.push_back(d);
    }
  } else {
    throw ParseError("word must be a digit string or an integer array");
  }
  return word;
}

// Kosaraju on the transition graph; returns component id per state.
std::vector<int> scc_ids(const DigitSystem& sys, int& count) {
  const int n = sys.num_states();
  const int a = sys.base();
  std::vector<std::vector<int>> rev(n);
  for (int s = 0; s < n; ++s)
    for (int d = 0; d < a; ++d)
      if (int t = sys.next(s, d); t >= 0) rev[t].push_back(s);

  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    seen[root] = 1;
    while (!stack.empty()) {
      auto& [s, d] = stack.back();
      if (d < a) {
        const int t = sys.next(s, d++);
        if (t >= 0 && !seen[t]) {
          seen[t] = 1;
          stack.emplace_back(t, 0);
        }
      } else {
        order.push_back(s);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] >= 0) continue;
    std::vector<int> stack{*it};
    comp[*it] = count;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int p : rev[s])
        if (comp[p] < 0) {
          comp[p] = count;
          stack.push_back(p);
        }
    }
    ++count;
  }
  return comp;
}

}  // namespace

DigitSystem::DigitSystem(int base, int num_states, int start, std::vector<int> next, std::string name)
    : base_(base), num_states_(num_states), start_(start), next_(std::move(next)), name_(std::move(name)) {}

DigitSystem DigitSystem::from_forbidden_words(int base, const std::vector<std::vector<int>>& words,
                                              std::string name) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  std::set<std::vector<int>> forbidden;
  for (const auto& w : words) {
    if (w.empty()) throw EmptySetError("empty set: the empty word is forbidden");
    for (int d : w)
      if (d < 0 || d >= base) throw ParseError("digit out of range in forbidden word");
    forbidden.insert(w);
  }
  std::map<std::vector<int>, int> prefix_id;
  std::vector<std::vector<int>> prefixes;
  auto add_prefix = [&](const std::vector<int>& p) {
    if (prefix_id.emplace(p, static_cast<int>(prefixes.size())).second) prefixes.push_back(p);
  };
  add_prefix({});
  for (const auto& w : forbidden)
    for (std::size_t len = 1; len < w.size(); ++len) add_prefix({w.begin(), w.begin() + len});

  std::vector<Edge> edges;
  for (std::size_t s = 0; s < prefixes.size(); ++s) {
    for (int d = 0; d < base; ++d) {
      std::vector<int> w = prefixes[s];
      w.push_back(d);
      bool blocked = false;
      for (std::size_t cut = 0; cut < w.size() && !blocked; ++cut)
        blocked = forbidden.count(std::vector<int>(w.begin() + cut, w.end())) > 0;
      if (blocked) continue;
      int target = 0;
      for (std::size_t cut = 0; cut <= w.size(); ++cut) {
        if (auto it = prefix_id.find(std::vector<int>(w.begin() + cut, w.end())); it != prefix_id.end()) {
          target = it->second;
          break;
        }
      }
      edges.push_back({static_cast<int>(s), d, target});
    }
  }
  return build_system(base, static_cast<int>(prefixes.size()), {0}, edges, std::move(name),
                      [](int b, int n, int st, std::vector<int> nx, std::string nm) {
                        return DigitSystem(b, n, st, std::move(nx), std::move(nm));
                      });
}

DigitSystem DigitSystem::from_automaton(int base, int num_states, const std::vector<int>& start,
                                        const std::vector<Edge>& edges, std::string name) {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (num_states < 1) throw ParseError("automaton needs at least one state");
  for (int s : start)
    if (s < 0 || s >= num_states) throw ParseError("start state out of range");
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= num_states || e.to < 0 || e.to >= num_states)
      throw ParseError("edge state out of range");
    if (e.digit < 0 || e.digit >= base) throw ParseError("edge digit out of range for base " + std::to_string(base));
  }
  return build_system(base, num_states, start, edges, std::move(name),
                      [](int b, int n, int st, std::vector<int> nx, std::string nm) {
                        return DigitSystem(b, n, st, std::move(nx), std::move(nm));
                      });
}

int DigitSystem::out_degree(int state) const {
  int k = 0;
  for (int d = 0; d < base_; ++d) k += next(state, d) >= 0;
  return k;
}

std::vector<Edge> DigitSystem::edges() const {
  std::vector<Edge> out;
  for (int s = 0; s < num_states_; ++s)
    for (int d = 0; d < base_; ++d)
      if (int t = next(s, d); t >= 0) out.push_back({s, d, t});
  return out;
}

DigitSystem parse_system(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("malformed set definition: ") + e.what(), line, col);
  }
  if (!doc.is_object()) throw ParseError("set definition must be an object", 1, 1);
  if (!doc.contains("base") || !doc["base"].is_number_integer()) throw ParseError("missing integer field 'base'");
  const int base = doc["base"].get<int>();
  if (base < 2 || base > 36) throw ParseError("base must be in [2, 36]");
  const std::string name = doc.value("name", std::string{});
  const std::string mode = doc.value("mode", std::string{});
  if (mode == "forbidden_words") {
    if (!doc.contains("words") || !doc["words"].is_array()) throw ParseError("forbidden_words mode needs a 'words' array");
    std::vector<std::vector<int>> words;
    for (const auto& w : doc["words"]) words.push_back(parse_word(w, base));
    return DigitSystem::from_forbidden_words(base, words, name);
  }
  if (mode == "automaton") {
    if (!doc.contains("states") || !doc["states"].is_number_integer()) throw ParseError("automaton mode needs integer 'states'");
    if (!doc.contains("edges") || !doc["edges"].is_array()) throw ParseError("automaton mode needs an 'edges' array");
    std::vector<int> start{0};
    if (doc.contains("start")) {
      if (!doc["start"].is_array()) throw ParseError("'start' must be an array of states");
      start = doc["start"].get<std::vector<int>>();
    }
    std::vector<Edge> edges;
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 3) throw ParseError("each edge must be [from, digit, to]");
      for (const auto& v : e)
        if (!v.is_number_integer()) throw ParseError("edge entries must be integers");
      edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
    }
    return DigitSystem::from_automaton(base, doc["states"].get<int>(), start, edges, name);
  }
  throw ParseError("'mode' must be 'forbidden_words' or 'automaton'");
}

DigitSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open set definition: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

long double point_value(const PointSpec& p, int base) {
  const long double a = base;
  long double period_value = 0;
  for (auto it = p.period.rbegin(); it != p.period.rend(); ++it) period_value = (period_value + *it) / a;
  if (!p.period.empty()) {
    period_value /= 1.0L - std::pow(a, -static_cast<long double>(p.period.size()));
  }
  long double v = period_value;
  for (auto it = p.preperiod.rbegin(); it != p.preperiod.rend(); ++it) v = (v + *it) / a;
  return v;
}

bool is_admissible(const DigitSystem& sys, const PointSpec& p) {
  if (p.period.empty()) return false;
  int s = sys.start();
  for (int d : p.preperiod) {
    if (d < 0 || d >= sys.base()) return false;
    s = sys.next(s, d);
    if (s < 0) return false;
  }
  for (int d : p.period)
    if (d < 0 || d >= sys.base()) return false;
  std::vector<char> seen(sys.num_states(), 0);
  while (!seen[s]) {
    seen[s] = 1;
    for (int d : p.period) {
      s = sys.next(s, d);
      if (s < 0) return false;
    }
  }
  return true;
}

PointSpec shift_point(const PointSpec& p) {
  PointSpec q = p;
  if (!q.preperiod.empty()) {
    q.preperiod.erase(q.preperiod.begin());
  } else if (!q.period.empty()) {
    std::rotate(q.period.begin(), q.period.begin() + 1, q.period.end());
  }
  return q;
}

PointSpec canonical_point(const DigitSystem& sys, const std::vector<int>& word) {
  int s = sys.start();
  for (int d : word) {
    if (d < 0 || d >= sys.base() || (s = sys.next(s, d)) < 0)
      throw std::domain_error("canonical_point: word is not admissible");
  }
  std::vector<int> first_seen(sys.num_states(), -1);
  std::vector<int> tail;
  while (first_seen[s] < 0) {
    first_seen[s] = static_cast<int>(tail.size());
    int d = 0;
    while (sys.next(s, d) < 0) ++d;
    tail.push_back(d);
    s = sys.next(s, d);
  }
  PointSpec p;
  p.preperiod = word;
  p.preperiod.insert(p.preperiod.end(), tail.begin(), tail.begin() + first_seen[s]);
  p.period.assign(tail.begin() + first_seen[s], tail.end());
  return p;
}

std::vector<long double> word_counts(const DigitSystem& sys, int n_max) {
  std::vector<long double> counts;
  std::vector<long double> cur(sys.num_states(), 0), nxt(sys.num_states());
  cur[sys.start()] = 1;
  for (int n = 0; n <= n_max; ++n) {
    long double total = 0;
    for (long double c : cur) total += c;
    counts.push_back(total);
    std::fill(nxt.begin(), nxt.end(), 0);
    for (int s = 0; s < sys.num_states(); ++s) {
      if (cur[s] == 0) continue;
      for (int d = 0; d < sys.base(); ++d)
        if (int t = sys.next(s, d); t >= 0) nxt[t] += cur[s];
    }
    std::swap(cur, nxt);
  }
  return counts;
}

std::vector<std::vector<int>> admissible_words(const DigitSystem& sys, int n) {
  if (n < 0) throw std::invalid_argument("depth must be >= 0");
  if (word_counts(sys, n).back() > static_cast<long double>(kMaxCylinders)) throw DepthTooLarge("depth too large");
  std::vector<std::vector<int>> out;
  std::vector<int> word;
  std::function<void(int)> rec = [&](int s) {
    if (static_cast<int>(word.size()) == n) {
      out.push_back(word);
      return;
    }
    for (int d = 0; d < sys.base(); ++d) {
      if (int t = sys.next(s, d); t >= 0) {
        word.push_back(d);
        rec(t);
        word.pop_back();
      }
    }
  };
  rec(sys.start());
  return out;
}

std::vector<bool> universal_states(const DigitSystem& sys) {
  const int n = sys.num_states();
  std::vector<bool> u(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) u[static_cast<std::size_t>(s)] = sys.out_degree(s) == sys.base();
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!u[static_cast<std::size_t>(s)]) continue;
      for (int d = 0; d < sys.base(); ++d)
        if (!u[static_cast<std::size_t>(sys.next(s, d))]) {
          u[static_cast<std::size_t>(s)] = false;
          changed = true;
          break;
        }
    }
  }
  return u;
}

Cover cover_at_depth(const DigitSystem& sys, int n) {
  if (n < 0) throw std::invalid_argument("depth must be >= 0");
  const long double total = word_counts(sys, n).back();
  if (total > static_cast<long double>(kMaxCylinders)) throw DepthTooLarge("depth too large: more than 1e8 cylinders");
  if (n * std::log2(static_cast<double>(sys.base())) > 62) throw DepthTooLarge("depth too large: a^n exceeds 2^62");
  Cover c;
  c.base = sys.base();
  c.depth = n;
  c.adic = true;
  c.cells.reserve(static_cast<std::size_t>(total));
  // Explicit stack DFS in digit order yields ascending indices.
  struct Frame {
    int state;
    int depth;
    std::uint64_t index;
  };
  const auto universal = universal_states(sys);
  std::vector<Frame> stack{{sys.start(), 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == n) {
      c.cells.push_back(f.index);
      c.solid.push_back(universal[static_cast<std::size_t>(f.state)] ? 1 : 0);
      continue;
    }
    for (int d = sys.base() - 1; d >= 0; --d)
      if (int t = sys.next(f.state, d); t >= 0)
        stack.push_back({t, f.depth + 1, f.index * static_cast<std::uint64_t>(sys.base()) + d});
  }
  const long double scale = std::pow(static_cast<long double>(sys.base()), -n);
  c.intervals.reserve(c.cells.size());
  for (std::uint64_t j : c.cells)
    c.intervals.push_back({static_cast<long double>(j) * scale, static_cast<long double>(j + 1) * scale});
  if (classify(sys).finite) c.points = finite_points(sys);
  return c;
}

std::vector<std::vector<int>> cyclic_components(const DigitSystem& sys) {
  int count = 0;
  const auto comp = scc_ids(sys, count);
  std::vector<std::vector<int>> members(count);
  for (int s = 0; s < sys.num_states(); ++s) members[comp[s]].push_back(s);
  std::vector<std::vector<int>> out;
  for (auto& m : members) {
    bool cyclic = m.size() > 1;
    if (m.size() == 1)
      for (int d = 0; d < sys.base(); ++d) cyclic |= sys.next(m[0], d) == m[0];
    if (cyclic) out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PerronResult perron(const DigitSystem& sys, std::span<const int> states) {
  const std::size_t k = states.size();
  if (k == 0) throw std::invalid_argument("perron: empty state set");
  std::map<int, std::size_t> local;
  for (std::size_t i = 0; i < k; ++i) local[states[i]] = i;
  // Adjacency restricted to `states`, as (row, col) multi-edge list.
  std::vector<std::pair<std::size_t, std::size_t>> adj;
  for (std::size_t i = 0; i < k; ++i)
    for (int d = 0; d < sys.base(); ++d)
      if (int t = sys.next(states[i], d); t >= 0)
        if (auto it = local.find(t); it != local.end()) adj.emplace_back(i, it->second);

  // Power iteration on I + A: primitive on a strongly connected component, and
  // the Collatz-Wielandt quotients bracket its spectral radius.
  std::vector<long double> v(k, 1.0L), w(k);
  constexpr int kMaxIter = 1'000'000;
  long double lo = 0, hi = 0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    std::copy(v.begin(), v.end(), w.begin());
    for (auto [i, j] : adj) w[i] += v[j];
    lo = std::numeric_limits<long double>::infinity();
    hi = 0;
    long double mx = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const long double q = w[i] / v[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      mx = std::max(mx, w[i]);
    }
    for (std::size_t i = 0; i < k; ++i) v[i] = w[i] / mx;
    const long double rho = (lo + hi) / 2 - 1;
    if (hi - lo <= 1e-13L * std::max(rho, 1e-300L)) return {rho, v};
  }
  std::ostringstream msg;
  msg << "perron: power iteration did not converge after " << kMaxIter << " steps (bounds " << lo - 1 << ", "
      << hi - 1 << ")";
  throw NumericalError(msg.str());
}

EntropyResult entropy_exact(const DigitSystem& sys) {
  long double rho = 0;
  for (const auto& comp : cyclic_components(sys)) rho = std::max(rho, perron(sys, comp).value);
  EntropyResult r;
  r.perron = rho;
  r.h = rho > 1.0L ? std::log(rho) : 0.0L;
  r.dim = r.h / std::log(static_cast<long double>(sys.base()));
  return r;
}

Classification classify(const DigitSystem& sys) {
  const auto comps = cyclic_components(sys);
  Classification c;
  c.transitive = comps.size() == 1;
  c.finite = true;
  for (const auto& comp : comps)
    for (int s : comp) c.finite &= sys.out_degree(s) == 1;

  // Every state must reach a branching state within num_states steps.
  const int n = sys.num_states();
  c.perfect = true;
  for (int s = 0; s < n && c.perfect; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    dist[s] = 0;
    q.push(s);
    bool branch = false;
    while (!q.empty() && !branch) {
      const int u = q.front();
      q.pop();
      if (sys.out_degree(u) >= 2) {
        branch = true;
        break;
      }
      if (dist[u] >= n) continue;
      for (int d = 0; d < sys.base(); ++d)
        if (int t = sys.next(u, d); t >= 0 && dist[t] < 0) {
          dist[t] = dist[u] + 1;
          q.push(t);
        }
    }
    c.perfect = branch;
  }
  return c;
}

std::vector<long double> finite_points(const DigitSystem& sys) {
  const auto comps = cyclic_components(sys);
  std::vector<char> on_cycle(sys.num_states(), 0);
  for (const auto& comp : comps)
    for (int s : comp) {
      if (sys.out_degree(s) != 1) throw std::domain_error("finite_points: system is infinite");
      on_cycle[s] = 1;
    }
  std::vector<long double> pts;
  std::vector<int> word;
  std::function<void(int)> rec = [&](int s) {
    if (on_cycle[s]) {
      PointSpec p;
      p.preperiod = word;
      int t = s;
      do {
        int d = 0;
        while (sys.next(t, d) < 0) ++d;
        p.period.push_back(d);
        t = sys.next(t, d);
      } while (t != s);
      pts.push_back(point_value(p, sys.base()));
      if (pts.size() > 1'000'000) throw DepthTooLarge("finite_points: too many points");
      return;
    }
    for (int d = 0; d < sys.base(); ++d)
      if (int t = sys.next(s, d); t >= 0) {
        word.push_back(d);
        rec(t);
        word.pop_back();
      }
  };
  rec(sys.start());
  std::sort(pts.begin(), pts.end());
  return pts;
}

DimensionEstimate box_count_estimate(const std::map<int, long double>& counts, int base) {
  if (counts.size() < 3) throw std::invalid_argument("box_count_estimate: need at least 3 depths");
  if (base < 2) throw std::invalid_argument("box_count_estimate: base must be >= 2");
  const long double la = std::log(static_cast<long double>(base));
  long double sx = 0, sy = 0;
  for (const auto& [n, c] : counts) {
    if (!(c >= 1)) throw std::invalid_argument("box_count_estimate: counts must be >= 1");
    sx += n * la;
    sy += std::log(c);
  }
  const long double m = static_cast<long double>(counts.size());
  const long double mx = sx / m, my = sy / m;
  long double sxx = 0, sxy = 0;
  for (const auto& [n, c] : counts) {
    const long double dx = n * la - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(c) - my);
  }
  DimensionEstimate est;
  est.counts = counts;
  est.slope = sxy / sxx;
  long double ss = 0;
  for (const auto& [n, c] : counts) {
    const long double r = std::log(c) - (my + est.slope * (n * la - mx));
    ss += r * r;
  }
  est.residual = std::sqrt(ss / m);
  return est;
}

}  // namespace adiclab
