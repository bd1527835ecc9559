#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aagf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed DSL input. Carries the byte offset and the token set the
/// parser would have accepted there.
struct SyntaxError : Error {
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& detail)
      : Error("syntax error at offset " + std::to_string(position) + ": " +
              detail),
        position(position),
        expected(std::move(expected)) {}
  std::size_t position;
  std::vector<std::string> expected;
};

struct EvaluationError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct DegenerateFit : Error {
  using Error::Error;
};

struct InconsistentEvidence : Error {
  using Error::Error;
};

struct MomentFailure : Error {
  MomentFailure(int k, double residual)
      : Error("moment " + std::to_string(k) + " residual " +
              std::to_string(residual) + " exceeds tolerance"),
        k(k),
        residual(residual) {}
  int k;
  double residual;
};

struct QuadratureError : Error {
  using Error::Error;
};

struct ConditioningFailure : Error {
  using Error::Error;
};

struct NoConvergentSubsequence : Error {
  using Error::Error;
};

struct UniquenessViolation : Error {
  using Error::Error;
};

struct NonHyperbolic : Error {
  using Error::Error;
};

struct OrderTooHigh : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace aagf
