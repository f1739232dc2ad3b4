#include "wqc/gd.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace wqc {

namespace {

double resolve_stepsize(const GdConfig& config, const ClassParams& params) {
  switch (config.stepsize_rule) {
    case StepsizeRule::OneOverL: return 1.0 / params.L;
    case StepsizeRule::GammaOverL: return params.gamma / params.L;
    case StepsizeRule::GammaOver2L: return params.gamma / (2.0 * params.L);
    case StepsizeRule::Fixed: return config.fixed_h;
  }
  throw InvalidInput("unknown stepsize rule");
}

std::int64_t nanos_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                              t0)
      .count();
}

}  // namespace

Trajectory gd_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                  const GdConfig& config) {
  if (!x0.allFinite()) throw InvalidInput("gd_run: x0 must be finite");
  if (!(params.L > 0.0)) throw InvalidInput("gd_run: params.L must be > 0");
  const double h = resolve_stepsize(config, params);
  if (!(h > 0.0)) throw InvalidInput("gd_run: resolved stepsize must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  Trajectory trajectory;
  Vector x = x0;
  double f = oracle.value(x);
  Vector g = oracle.gradient(x);
  trajectory.records.push_back({0, x, f, g.norm(), std::nullopt, nanos_since(t0)});

  for (int k = 0; k < config.max_iter; ++k) {
    if (g.norm() <= config.grad_tol) break;
    x -= h * g;
    const double f_next = oracle.value(x);
    if (!std::isfinite(f_next) || f_next > f + 1e6 * (1.0 + std::abs(f)))
      throw InvariantViolation("gd_run diverged at iteration " + std::to_string(k + 1) +
                               ": f went from " + std::to_string(f) + " to " +
                               std::to_string(f_next) + " (is L correct?)");
    f = f_next;
    g = oracle.gradient(x);
    trajectory.records.push_back({k + 1, x, f, g.norm(), std::nullopt, nanos_since(t0)});
  }
  return trajectory;
}

double gd_envelope(const ClassParams& params, GdEnvelope variant, int k, double r0sq,
                   double f0gap) {
  if (k < 0) throw InvalidInput("gd_envelope: k must be >= 0");
  if (r0sq < 0.0 || f0gap < 0.0) throw InvalidInput("gd_envelope: r0sq and f0gap must be >= 0");
  const double L = params.L;
  const double gamma = params.gamma;
  const double mu = params.mu;
  if (variant != GdEnvelope::WqcSublinear && !(mu > 0.0))
    throw InvalidInput("gd_envelope: linear variants need mu > 0");

  switch (variant) {
    case GdEnvelope::WqcSublinear:
      return L * r0sq / (gamma * (k + 1));
    case GdEnvelope::WqscLinear:
      return std::pow(1.0 - gamma * gamma * mu / L, k) * r0sq;
    case GdEnvelope::WqGrowthLinear:
      return std::pow(1.0 - gamma * gamma * mu / (4.0 * L), k) * r0sq;
    case GdEnvelope::GradDomLinear:
      return std::pow(1.0 - mu * gamma * gamma / L, k) * f0gap;
  }
  throw InvalidInput("unknown envelope variant");
}

}  // namespace wqc
