#include "wqc/oqa.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "wqc/linesearch.hpp"

namespace wqc {

namespace {

std::int64_t nanos_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                              t0)
      .count();
}

}  // namespace

Vector grad_step(ObjectiveOracle& oracle, double L, const Vector& x) {
  if (!(L > 0.0)) throw InvalidInput("grad_step: L must be > 0");
  return x - oracle.gradient(x) / L;
}

Quadratic lower_quadratic(ObjectiveOracle& oracle, double gamma, double mu,
                          const Vector& x_bar) {
  if (!(mu > 0.0)) throw InvalidInput("lower_quadratic: needs mu > 0");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidInput("lower_quadratic: gamma must be in (0, 1]");
  const double f = oracle.value(x_bar);
  const Vector g = oracle.gradient(x_bar);
  Quadratic q;
  q.m = f - g.squaredNorm() / (2.0 * mu * gamma * gamma);
  q.c = x_bar - g / (mu * gamma);
  q.kappa = mu;
  return q;
}

std::pair<Quadratic, double> optimal_average(const Quadratic& A, const Quadratic& B) {
  if (A.c.size() != B.c.size()) throw InvalidInput("optimal_average: center dimension mismatch");
  if (!(A.kappa > 0.0) || !(B.kappa > 0.0))
    throw InvalidInput("optimal_average: curvatures must be > 0");
  const double scale = std::max({std::abs(A.kappa), std::abs(B.kappa), 1.0});
  if (std::abs(A.kappa - B.kappa) > 1e-12 * scale)
    throw InvalidInput("optimal_average: curvature mismatch");

  const double mu = B.kappa;
  const double dist_sq = (A.c - B.c).squaredNorm();
  double lambda;
  if (dist_sq == 0.0) {
    lambda = A.m > B.m ? 1.0 : 0.0;
  } else {
    // m(lambda) is strictly concave; clamp its vertex into [0, 1].
    lambda = std::clamp(0.5 + (A.m - B.m) / (mu * dist_sq), 0.0, 1.0);
  }

  Quadratic out;
  out.kappa = mu;
  out.c = lambda * A.c + (1.0 - lambda) * B.c;
  out.m = lambda * A.m + (1.0 - lambda) * B.m + 0.5 * mu * lambda * (1.0 - lambda) * dist_sq;
  return {out, lambda};
}

OqaRun oqa_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
               int max_iter, double gap_tol) {
  if (!(params.mu > 0.0)) throw InvalidInput("oqa_run: needs mu > 0");
  if (!x0.allFinite()) throw InvalidInput("oqa_run: x0 must be finite");
  params.validate();
  const double L = params.L;
  const double rate = 1.0 - std::sqrt(params.mu * params.gamma * params.gamma / L);

  const auto t0 = std::chrono::steady_clock::now();
  OqaRun run;

  OqaState state;
  state.k = 0;
  state.x = x0;
  state.Q = lower_quadratic(oracle, params.gamma, params.mu, x0);
  state.x_plus = grad_step(oracle, L, x0);
  state.f_x_plus = oracle.value(state.x_plus);
  state.best_value = state.f_x_plus;

  const double gap0 = state.f_x_plus - state.Q.m;
  double gap = gap0;

  const auto log_state = [&]() {
    const double env = state.Q.m + std::pow(rate, state.k) * gap0;
    run.trajectory.records.push_back({state.k, state.x_plus, state.f_x_plus,
                                      oracle.gradient(state.x_plus).norm(), env,
                                      nanos_since(t0)});
    run.states.push_back(state);
    run.gaps.push_back(state.f_x_plus - state.Q.m);
  };
  log_state();

  for (int k = 1; k <= max_iter && gap > gap_tol; ++k) {
    const Vector x_k = segment_min(oracle, state.Q.c, state.x_plus).point;
    const Quadratic fresh = lower_quadratic(oracle, params.gamma, params.mu, x_k);
    const auto [Qk, lambda] = optimal_average(fresh, state.Q);

    state.k = k;
    state.x = x_k;
    state.Q = Qk;
    state.x_plus = grad_step(oracle, L, x_k);
    state.f_x_plus = oracle.value(state.x_plus);
    state.best_value = std::min(state.best_value, state.f_x_plus);

    const double gap_next = state.f_x_plus - state.Q.m;
    if (gap_next > gap * (1.0 + 1e-9) + 1e-12) {
      std::ostringstream msg;
      msg << "oqa_run: gap increased from " << gap << " to " << gap_next << " at k = " << k
          << "; the supplied class constants are wrong for this oracle";
      throw InvariantViolation(msg.str());
    }
    gap = gap_next;
    log_state();
  }
  return run;
}

}  // namespace wqc
