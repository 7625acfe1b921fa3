#pragma once

#include <stdexcept>
#include <string>

namespace qbd {

// Root of every error raised by the simulation library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A physical parameter is outside its domain (negative Q, NaN temperature, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition, e.g. passed an unnormalized distribution.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Probability mass reached the last retained photon level.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : Error(what + " (time reached: " + std::to_string(time_reached) + " s)"),
        time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

// The observer filter assigned (numerically) zero probability to a recorded outcome.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

}  // namespace qbd
