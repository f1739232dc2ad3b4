#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wqc/linesearch.hpp"
#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

/// Selects between the two accelerated update rules. scale = 1 runs the base
/// algorithm at effective_gamma; scale = 4 runs the quadratic-growth variant,
/// whose alpha equation carries the factor 4 and whose v-update uses the
/// 2 alpha_k / gamma gradient coefficient.
struct WesVariant {
  double scale = 1.0;
  double effective_gamma = 1.0;

  static WesVariant algorithm1(double gamma) { return {1.0, gamma}; }
  static WesVariant algorithm2(double gamma) { return {4.0, gamma}; }
};

/// State after k accelerated steps. The alpha/beta/y fields describe the step
/// that produced this state (alpha_{k-1} etc.); they are zero / x0 at k = 0.
/// f_x caches f(x) so the certificate f(x_k) <= phi_star is checkable without
/// extra oracle calls.
struct WesState {
  int k = 0;
  Vector x;
  Vector v;
  Vector y;
  double f_x = 0.0;
  double gamma_k = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 1.0;
  double phi_star = 0.0;
  long step_halvings = 0;  // cumulative safeguard events (see wes_step)
};

/// One recorded step, enough to replay the estimate-sequence recursion.
struct WesHistoryStep {
  Vector y;
  Vector grad_y;
  double f_y = 0.0;
  double alpha = 0.0;
};

struct WesHistory {
  double gamma0 = 0.0;
  double phi0_star = 0.0;
  Vector v0;
  double gamma = 1.0;  // gamma used inside the lower-estimate q_k
  double mu = 0.0;
  std::vector<WesHistoryStep> steps;

  std::string to_json(int indent = -1) const;
  static WesHistory from_json(const std::string& text);
};

/// Unique positive root of (scale L / gamma^2) a^2 + (gamma_k - mu) a - gamma_k = 0.
/// Throws ParameterRegimeError when the root is not in (0, 1), i.e. when
/// mu >= scale L / gamma^2 (acceleration collapses there).
double solve_alpha(double L, double gamma, double mu, double gamma_k, double scale);

/// One accelerated step: alpha from solve_alpha, y by line search on
/// [v_k, x_k] subject to the y-condition, x_{k+1} = y - (1/L) grad f(y),
/// then the v / phi_star / lambda updates. Re-verifies the certificate
/// f(x_{k+1}) <= phi*_{k+1}; a violation beyond tolerance throws
/// InvariantViolation (wrong L, gamma or mu for this oracle).
/// When f(x_{k+1}) comes back non-finite or >= 1e299 (a safeguarded oracle
/// reporting an inadmissible point), the gradient step is halved up to 60
/// times and the event is counted in step_halvings.
WesState wes_step(ObjectiveOracle& oracle, const ClassParams& params, const WesState& state,
                  const WesVariant& variant, std::vector<WesHistoryStep>* record = nullptr);

struct WesRun {
  Trajectory trajectory;
  std::vector<WesState> states;
  WesHistory history;
};

/// Full accelerated run. v_0 = x_0, gamma_0 defaults to max(L, mu/gamma),
/// phi*_0 = f(x_0). The trajectory's envelope column carries
/// lambda_k (f(x_0) - f* + (gamma_0/2)||x_0 - x*||^2) when the oracle knows
/// its minimum.
WesRun agd_run_recorded(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                        std::optional<double> gamma0, int max_iter, double grad_tol,
                        const WesVariant& variant);

Trajectory agd_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                   std::optional<double> gamma0, int max_iter, double grad_tol,
                   const WesVariant& variant);

/// min( (1 - sqrt(mu gamma^2 / L))^k, 4L / (2 sqrt(L) + gamma k sqrt(gamma0))^2 ).
/// Requires gamma0 >= mu / gamma.
double lambda_envelope(const ClassParams& params, double gamma0, int k);

/// Evaluates phi_k at each probe both by unrolling the recursive
/// lower-estimate construction and by the canonical form
/// phi*_k + (gamma_k/2)||x - v_k||^2, for every k in the history.
/// Returns the largest absolute discrepancy (pure rounding when the
/// canonical-form updates are exact).
double phi_consistency_probe(const WesHistory& history, const std::vector<Vector>& probes);

}  // namespace wqc
