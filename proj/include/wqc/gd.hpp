#pragma once

#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

enum class StepsizeRule { OneOverL, GammaOverL, GammaOver2L, Fixed };

struct GdConfig {
  StepsizeRule stepsize_rule = StepsizeRule::OneOverL;
  double fixed_h = 0.0;  // used by StepsizeRule::Fixed, must be > 0
  int max_iter = 1000;
  double grad_tol = 0.0;
};

/// Gradient descent x_{k+1} = x_k - h grad f(x_k) with h resolved from the
/// rule and params. Stops at max_iter or ||grad f|| <= grad_tol. Aborts with
/// InvariantViolation if f increases by more than 1e6 (1 + |f|) in one step.
Trajectory gd_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                  const GdConfig& config);

enum class GdEnvelope { WqcSublinear, WqscLinear, WqGrowthLinear, GradDomLinear };

/// Theoretical per-iteration bound for the matching stepsize rule:
///   WqcSublinear   L r0sq / (gamma (k+1))            bounds f(x_k) - f*
///   WqscLinear     (1 - gamma^2 mu / L)^k   r0sq     bounds ||x_k - x*||^2
///   WqGrowthLinear (1 - gamma^2 mu / (4L))^k r0sq    bounds ||x_k - x*||^2
///   GradDomLinear  (1 - mu gamma^2 / L)^k   f0gap    bounds f(x_k) - f*
double gd_envelope(const ClassParams& params, GdEnvelope variant, int k, double r0sq,
                   double f0gap);

}  // namespace wqc
