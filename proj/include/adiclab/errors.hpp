#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adiclab {

// Input document could not be parsed. Line/column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// The admissible language is empty after pruning.
class EmptySetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Enumeration would exceed a hard cap (cylinder count or pair count).
class DepthTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An iterative numerical method failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A cover interval straddles a breakpoint of a piecewise map.
class SplitRequired : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace adiclab
