#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace glio {

// Malformed input file; line is 1-based, 0 when unknown.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A mesh that violates index, orientation, or conformity invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite value produced or consumed by a numerical kernel.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (relative residual " + scientific(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  static std::string scientific(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
  }
  double residual_;
};

// Failure inside a time-stepping sweep; step is the index being computed.
class SteppingError : public std::runtime_error {
 public:
  SteppingError(const std::string& what, std::size_t step)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace glio
