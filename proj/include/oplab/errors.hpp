#pragma once

#include <stdexcept>
#include <string>

namespace oplab {

// Structured errors: every failure names the offending quantities so callers
// can react programmatically instead of parsing prose.

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(const std::string& where, long expected, long got)
      : std::invalid_argument(where + ": dimension mismatch (expected " +
                              std::to_string(expected) + ", got " +
                              std::to_string(got) + ")"),
        expected(expected),
        got(got) {}
  long expected;
  long got;
};

// An invariant of a validated object failed; carries which one and by how much.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& where, const std::string& invariant,
                  double residual)
      : std::runtime_error(where + ": invariant '" + invariant +
                           "' violated, residual " + std::to_string(residual)),
        invariant(invariant),
        residual(residual) {}
  std::string invariant;
  double residual = 0.0;
};

// An operation's precondition failed (commutant membership, mode limits, ...).
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& where, const std::string& condition,
                    double residual = 0.0)
      : std::runtime_error(where + ": precondition '" + condition +
                           "' failed (residual " + std::to_string(residual) +
                           ")"),
        condition(condition),
        residual(residual) {}
  std::string condition;
  double residual = 0.0;
};

// Contour truncation error above budget; carries suggested radii.
class RefinementNeeded : public std::runtime_error {
 public:
  RefinementNeeded(double truncation, double budget, double suggested_r_min,
                   double suggested_r_max)
      : std::runtime_error(
            "contour truncation error " + std::to_string(truncation) +
            " exceeds budget " + std::to_string(budget) +
            "; suggest r_min=" + std::to_string(suggested_r_min) +
            ", r_max=" + std::to_string(suggested_r_max)),
        truncation(truncation),
        budget(budget),
        suggested_r_min(suggested_r_min),
        suggested_r_max(suggested_r_max) {}
  double truncation, budget, suggested_r_min, suggested_r_max;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oplab
