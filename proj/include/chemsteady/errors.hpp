#ifndef CHEMSTEADY_ERRORS_HPP
#define CHEMSTEADY_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace chemsteady {

/// Invalid user-facing input: bad geometry parameters, inadmissible
/// coefficients, malformed configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A solver failed to reach its tolerance. Carries whatever diagnostic
/// quantities the failing algorithm could produce. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double achieved = 0.0,
                          std::vector<double> history = {})
      : std::runtime_error(what),
        achieved_(achieved),
        history_(std::move(history)) {}

  /// Residual or error estimate reached before giving up.
  double achieved() const { return achieved_; }
  /// Per-iteration step norms, when the failing loop tracked them.
  const std::vector<double>& history() const { return history_; }

 private:
  double achieved_;
  std::vector<double> history_;
};

}  // namespace chemsteady

#endif  // CHEMSTEADY_ERRORS_HPP
