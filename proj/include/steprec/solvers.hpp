#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace steprec {

/// Thrown when an objective returns NaN/Inf; carries the offending argument.
class ObjectiveError : public std::runtime_error {
 public:
  explicit ObjectiveError(std::vector<double> arg);
  const std::vector<double>& argument() const { return arg_; }

 private:
  std::vector<double> arg_;
};

// Coarse presample count used before the 1-D interval refinement.
inline constexpr int kPresampleCount = 33;

struct ScalarProblem {
  std::function<double(double)> objective;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-5;
};

struct ScalarResult {
  double argmin;
  double value;
};

/// Deterministic bounded 1-D minimization: 33-point presample, then
/// golden-section refinement of the bracket around the best sample.
/// Ties break toward the smaller argument.
ScalarResult minimize_scalar(const ScalarProblem& prob);

struct BoxProblem {
  std::function<double(std::span<const double>)> objective;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> init;
  double tol = 1e-5;
  int max_iter = 400;
  // Additional restart points beyond the fixed corner-midpoint schedule.
  std::vector<std::vector<double>> extra_inits;
};

struct BoxResult {
  std::vector<double> argmin;
  double value;
};

/// Deterministic box-constrained minimization: Nelder-Mead with bound
/// clipping, restarted from init, the 2^n corner midpoints and any
/// extra_inits; best restart wins. Result is clipped to the box.
BoxResult minimize_box(const BoxProblem& prob);

}  // namespace steprec
