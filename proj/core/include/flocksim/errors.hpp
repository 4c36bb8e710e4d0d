#pragma once

#include <stdexcept>
#include <string>

namespace flocksim {

/// Malformed or inconsistent configuration (bad scenario file, mismatched
/// dimensions, invalid parameter ranges).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario-file syntax error; carries the line number in the message.
class ParseError : public ConfigError {
 public:
  explicit ParseError(const std::string& what) : ConfigError(what) {}
};

/// An API precondition was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

/// The simulated state left the representable range (NaN/Inf).
class NumericalDivergence : public std::runtime_error {
 public:
  explicit NumericalDivergence(const std::string& what) : std::runtime_error(what) {}
};

/// An initially connected pair reached the sensing radius, or a pair
/// collided; the run cannot continue.
class BarrierViolation : public std::runtime_error {
 public:
  explicit BarrierViolation(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the CLI.  0 means success; CLI11 reports its
// own usage errors as 1.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 2;
inline constexpr int validation_error = 3;
inline constexpr int numerical_divergence = 4;
inline constexpr int barrier_violation = 5;
inline constexpr int verification_failure = 6;
}  // namespace exit_code

}  // namespace flocksim
