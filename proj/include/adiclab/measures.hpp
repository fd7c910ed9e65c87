#pragma once

// Markov measures on digit systems, sampled push-forwards under smooth maps,
// Cesaro averaging under T_a, and cylinder-entropy dimension estimates. The
// curved-map experiment here is a sampled proxy, not a proof of anything.

#include <cstdint>
#include <string>
#include <vector>

#include "adiclab/digit_system.hpp"
#include "adiclab/smooth_map.hpp"

namespace adiclab {

struct EdgeWeight {
  int from = 0;
  int digit = 0;
  long double weight = 0;
};

struct MarkovMeasure {
  int base = 2;
  std::string weights;  // "uniform", "parry" or "explicit"
  std::vector<int> states;  // the recurrent core, ascending
  // transition[s * base + d]: probability of digit d from state s; zero off the core
  std::vector<long double> transition;
  std::vector<int> next;  // next[s * base + d], -1 when absent
  std::vector<long double> stationary;  // indexed by state, zero off the core
  long double entropy = 0;
  long double dimension = 0;

  long double p(int s, int d) const { return transition[static_cast<std::size_t>(s) * base + d]; }
};

// Throws std::invalid_argument unless the system has exactly one recurrent
// class. `explicit_weights` is used only with weights == "explicit"; weights
// on each state are normalised, missing edges get weight zero.
MarkovMeasure markov_from_system(const DigitSystem& sys, const std::string& weights = "uniform",
                                 const std::vector<EdgeWeight>& explicit_weights = {});

struct EmpiricalCloud {
  std::vector<long double> points;  // in [0, 1)
  std::uint64_t seed = 0;
  std::string provenance;
  std::uint64_t clamped = 0;  // images outside [0, 1) pulled back in
};

// Samples per block; each block draws from its own generator seeded from
// (seed, block), so clouds do not depend on the worker count.
inline constexpr std::size_t kSampleBlock = 1 << 16;
inline constexpr std::uint64_t kMaxSamples = 100'000'000;

EmpiricalCloud sample_measure(const MarkovMeasure& mu, std::uint64_t samples, std::uint64_t seed);

// Draws x ~ mu with N + 40 digits, maps it through f, then applies T_a^n for
// n uniform in [0, N). Requires N log2(a) <= 40 so the long double image
// keeps enough digits after the shift.
EmpiricalCloud cesaro_pushforward_samples(const MarkovMeasure& mu, const SmoothMap& f, int N,
                                          std::uint64_t samples, std::uint64_t seed);

struct ScaleEntropy {
  int depth = 0;
  int base = 2;
  std::uint64_t samples = 0;
  std::uint64_t occupied = 0;
  long double plugin = 0;     // plug-in entropy, nats
  long double corrected = 0;  // with the Miller-Madow term (K - 1) / 2S
  long double dimension = 0;  // corrected / (n log a)
  long double std_error = 0;  // from ten contiguous folds
  bool undersampled = false;  // S < 100 a^n
};

// Throws std::invalid_argument when S < a^n.
ScaleEntropy entropy_at_scale(const EmpiricalCloud& cloud, int depth, int base);

// Depth-n cylinder counts, a^n <= 2^26.
std::vector<std::uint64_t> cylinder_histogram(const EmpiricalCloud& cloud, int depth, int base);
long double total_variation(const std::vector<std::uint64_t>& h1, const std::vector<std::uint64_t>& h2);

struct CurvedProxyParams {
  int iterations = 12;  // N
  std::uint64_t samples = 1'000'000;
  int depth = 8;
  std::uint64_t seed = 1;
};

struct CurvedProxyReport {
  long double s = 0;
  ScaleEntropy estimate;
  long double margin = 0;
  std::uint64_t clamped = 0;
  std::string disclaimer;
};

extern const char* const kProxyDisclaimer;

// Requires 0 < dim mu <= 1 and nonzero curvature on every piece of f. The
// sampled cloud is moved into *cloud_out when given.
CurvedProxyReport curved_proxy_experiment(const MarkovMeasure& mu, const SmoothMap& f, const CurvedProxyParams& params,
                                   EmpiricalCloud* cloud_out = nullptr);

std::string to_csv(const EmpiricalCloud& cloud);

}  // namespace adiclab
