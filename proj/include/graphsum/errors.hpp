#ifndef GRAPHSUM_ERRORS_HPP
#define GRAPHSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace graphsum {

/// Shape disagreement between matrix operands. The message names both shapes.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite value (NaN/Inf) where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input that is structurally valid but numerically unusable (zero-norm row, empty cluster).
class DegenerateInputError : public std::runtime_error {
 public:
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Violated call contract (k > n, position out of range, non-symmetric matrix).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file; carries the line number where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Well-formed input that fails a corpus- or config-level consistency rule.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable, truncated, or incompatible model checkpoint.
class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace graphsum

#endif  // GRAPHSUM_ERRORS_HPP
