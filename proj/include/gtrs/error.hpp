#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gtrs {

enum class ErrorKind {
  InvalidInput,       // malformed arguments, files, dimensions
  Validation,         // problem violates a standing assumption
  Unbounded,          // problem is unbounded below
  Unsupported,        // recognised but out of scope (singleton interval, ...)
  IterativeFailure,   // an iterative method did not converge
  Precondition,       // caller broke an operation's contract
  Numerical,          // inconsistent numerical state
  StalledLineSearch,  // Armijo backtracking exhausted
};

const char* to_string(ErrorKind kind);

/// Base exception for the library. `stage` names the pipeline stage that
/// raised it (empty when thrown outside the solve pipeline).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {})
      : std::runtime_error(message), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

private:
  ErrorKind kind_;
  std::string stage_;
};

/// Non-convergence of an iterative method; carries the best iterate seen.
class IterativeFailure : public Error {
public:
  IterativeFailure(const std::string& message, std::vector<double> best, double residual)
      : Error(ErrorKind::IterativeFailure, message), best_(std::move(best)),
        residual_(residual) {}

  const std::vector<double>& best() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }

private:
  std::vector<double> best_;
  double residual_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace gtrs
