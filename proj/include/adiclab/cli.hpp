#pragma once

// Command-line front end: loads set and map definitions, runs one named
// experiment and writes a JSON report with a fixed field order.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "adiclab/digit_system.hpp"

namespace adiclab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kMaxCliDepth = 20;

enum ExitCode { kExitOk = 0, kExitFailed = 1, kExitUsage = 2 };

struct ExperimentConfig {
  std::string command;
  std::string set_path;
  std::string map_path;
  std::string out_path;
  std::string point;  // "PRE(PERIOD)", digits 0-9 then a-z
  std::optional<int> depth;
  std::optional<std::pair<int, int>> depths;
  std::optional<std::uint64_t> resolution;
  std::optional<long double> epsilon;
  std::optional<int> guard;
  std::optional<int> b;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  bool summary = false;
  bool timing = false;  // adds wall time, which makes reports run-dependent
  std::string weights = "uniform";
  std::uint64_t samples = 1'000'000;
  int iterations = 12;
  int net_depth = 4;
  int max_den = 9;
  long double max_abs = 3;
  int translations = 729;
  long double tol = 0.02L;
};

struct RunOutcome {
  int status = kExitOk;
  std::string report;   // empty when the run failed before producing results
  std::string summary;  // plain text, one line per headline number
  std::string error;
};

// Never throws; errors become status 2 with a diagnostic in `error`.
RunOutcome run(const ExperimentConfig& cfg);

// Throws std::ios_base::failure when the path cannot be written.
void emit_report(const std::string& report, const std::string& path);

// "lo..hi" or a single depth.
std::pair<int, int> parse_depths(std::string_view text);
// "PRE(PERIOD)" such as "(0)", "2(0)" or "(02)".
PointSpec parse_point(std::string_view text, int base);
std::string format_point(const PointSpec& p);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adiclab
