#ifndef CYCLO_ERRORS_HPP_
#define CYCLO_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclo {

/// Raised when a function receives a non-finite or out-of-domain argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Euler-rate map evaluated within the gimbal-lock band (|cos pitch| <= 1e-6).
class GimbalSingularity : public std::domain_error {
 public:
  explicit GimbalSingularity(double pitch)
      : std::domain_error("gimbal singularity at pitch " + std::to_string(pitch)),
        pitch_(pitch) {}
  double pitch() const noexcept { return pitch_; }

 private:
  double pitch_;
};

/// Integration produced a non-finite state. Carries the last state seen.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

/// Actuator request outside the rotor-speed or servo envelope.
class SaturationError : public std::runtime_error {
 public:
  explicit SaturationError(std::vector<std::string> channels)
      : std::runtime_error(describe(channels)), channels_(std::move(channels)) {}
  const std::vector<std::string>& channels() const noexcept { return channels_; }

 private:
  static std::string describe(const std::vector<std::string>& channels) {
    std::string msg = "actuator saturation on:";
    for (const auto& c : channels) msg += " " + c;
    return msg;
  }
  std::vector<std::string> channels_;
};

/// NMPC descent hit a non-finite cost.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, int iteration, double last_cost)
      : std::runtime_error(what), iteration_(iteration), last_cost_(last_cost) {}
  int iteration() const noexcept { return iteration_; }
  double last_cost() const noexcept { return last_cost_; }

 private:
  int iteration_;
  double last_cost_;
};

/// Config or mission file could not be parsed. `where` is a key path or line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace cyclo

#endif  // CYCLO_ERRORS_HPP_
