#include "wqc/wes.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wqc {

namespace {

double sqrt_scale(double scale) {
  if (scale == 1.0) return 1.0;
  if (scale == 4.0) return 2.0;
  throw InvalidInput("WesVariant.scale must be 1 or 4");
}

std::int64_t nanos_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                              t0)
      .count();
}

constexpr double kInadmissible = 1e299;  // safeguarded oracles report >= this

}  // namespace

double solve_alpha(double L, double gamma, double mu, double gamma_k, double scale) {
  if (!(L > 0.0)) throw InvalidInput("solve_alpha: L must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidInput("solve_alpha: gamma must be in (0, 1]");
  if (!(mu >= 0.0)) throw InvalidInput("solve_alpha: mu must be >= 0");
  if (!(gamma_k > 0.0)) throw InvalidInput("solve_alpha: gamma_k must be > 0");
  sqrt_scale(scale);

  const double A = (scale * L) / (gamma * gamma);
  if (mu >= A * (1.0 - 1e-9)) {
    std::ostringstream msg;
    msg << "solve_alpha: mu = " << mu << " >= scale*L/gamma^2 = " << A
        << "; the alpha equation has no root in (0, 1)";
    throw ParameterRegimeError(msg.str());
  }
  // A a^2 + (gamma_k - mu) a - gamma_k = 0; the roots have negative product,
  // so exactly one is positive. Rationalized form avoids cancellation.
  const double b = gamma_k - mu;
  return 2.0 * gamma_k / (b + std::sqrt(b * b + 4.0 * A * gamma_k));
}

WesState wes_step(ObjectiveOracle& oracle, const ClassParams& params, const WesState& state,
                  const WesVariant& variant, std::vector<WesHistoryStep>* record) {
  const double L = params.L;
  const double mu = params.mu;
  const double s = sqrt_scale(variant.scale);
  const double ge = variant.effective_gamma / s;  // gamma of the embedded base scheme

  const double alpha =
      solve_alpha(L, variant.effective_gamma, mu, state.gamma_k, variant.scale);
  const double gamma_next = (1.0 - alpha) * state.gamma_k + alpha * mu;

  // Step 5: y on [v_k, x_k]; beta = 1 (y = x_k) first, exact search otherwise.
  // Cheap candidates are taken only at strictly nonnegative slack: a tolerance
  // here would inject per-step error with no relation to the iterate scale.
  std::map<double, Vector> grad_cache;
  const auto condition = [&](const SegmentSearchResult& cand) {
    const Vector gy = oracle.gradient(cand.point);
    grad_cache[cand.t] = gy;
    return y_condition_slack(state.f_x, cand.value, gy, state.v, cand.point, alpha,
                             state.gamma_k, gamma_next, ge, mu)
               .second >= 0.0;
  };
  const SegmentSearchResult ysel = segment_min(oracle, state.v, state.x, 1e-10, condition);

  const Vector& y = ysel.point;
  const double f_y = ysel.value;
  Vector grad_y;
  if (auto it = grad_cache.find(ysel.t); it != grad_cache.end())
    grad_y = it->second;
  else
    grad_y = oracle.gradient(y);

  const auto [cond_ok, cond_slack] =
      y_condition_slack(state.f_x, f_y, grad_y, state.v, y, alpha, state.gamma_k, gamma_next,
                        ge, mu);
  if (!cond_ok) {
    std::ostringstream msg;
    msg << "wes_step: line-search condition infeasible after exact minimization at k = "
        << state.k << " (slack " << cond_slack << ", beta " << ysel.t
        << "); the supplied class constants are wrong for this oracle";
    throw InvariantViolation(msg.str());
  }

  // Step 6, with the instability safeguard: halve until the value is admissible.
  WesState next;
  next.step_halvings = state.step_halvings;
  double h = 1.0 / L;
  Vector x_next = y - h * grad_y;
  double f_next = oracle.value(x_next);
  for (int j = 0; j < 60 && (!std::isfinite(f_next) || f_next >= kInadmissible); ++j) {
    h *= 0.5;
    x_next = y - h * grad_y;
    f_next = oracle.value(x_next);
    ++next.step_halvings;
  }
  if (!std::isfinite(f_next) || f_next >= kInadmissible)
    throw InvariantViolation("wes_step: no admissible gradient step after 60 halvings at k = " +
                             std::to_string(state.k));

  const Vector vy = state.v - y;
  const Vector v_next =
      ((1.0 - alpha) * state.gamma_k * state.v + alpha * mu * y - (alpha / ge) * grad_y) /
      gamma_next;
  const double phi_next =
      (1.0 - alpha) * state.phi_star + alpha * f_y -
      alpha * alpha / (2.0 * ge * ge * gamma_next) * grad_y.squaredNorm() +
      (alpha * (1.0 - alpha) * state.gamma_k / gamma_next) *
          (mu / (2.0 * ge) * vy.squaredNorm() + grad_y.dot(vy) / ge);

  if (f_next > phi_next + 1e-9 * (1.0 + std::abs(phi_next))) {
    std::ostringstream msg;
    msg << "wes_step: certificate f(x_{k+1}) <= phi*_{k+1} failed at k = " << state.k
        << ": f = " << f_next << ", phi* = " << phi_next
        << ", alpha = " << alpha << ", gamma_k = " << state.gamma_k
        << "; the supplied (L, gamma, mu) are wrong for this oracle";
    throw InvariantViolation(msg.str());
  }

  if (record) record->push_back({y, grad_y, f_y, alpha});

  next.k = state.k + 1;
  next.x = x_next;
  next.v = v_next;
  next.y = y;
  next.f_x = f_next;
  next.gamma_k = gamma_next;
  next.alpha = alpha;
  next.beta = ysel.t;
  next.lambda = (1.0 - alpha) * state.lambda;
  next.phi_star = phi_next;
  return next;
}

WesRun agd_run_recorded(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                        std::optional<double> gamma0, int max_iter, double grad_tol,
                        const WesVariant& variant) {
  params.validate();
  if (!x0.allFinite()) throw InvalidInput("agd_run: x0 must be finite");
  const double s = sqrt_scale(variant.scale);
  const double ge = variant.effective_gamma / s;
  const double g0 = gamma0 ? *gamma0 : std::max(params.L, params.mu / ge);
  if (!(g0 > 0.0)) throw InvalidInput("agd_run: gamma0 must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  WesRun run;

  WesState state;
  state.k = 0;
  state.x = x0;
  state.v = x0;
  state.y = x0;
  state.f_x = oracle.value(x0);
  state.gamma_k = g0;
  state.lambda = 1.0;
  state.phi_star = state.f_x;

  run.history.gamma0 = g0;
  run.history.phi0_star = state.phi_star;
  run.history.v0 = x0;
  run.history.gamma = ge;
  run.history.mu = params.mu;

  // Envelope: lambda_k (f(x0) - f* + (gamma0/2) ||x0 - x*||^2), when known.
  std::optional<double> bound_scale;
  if (oracle.known_minimum() && oracle.known_minimizer()) {
    bound_scale = state.f_x - *oracle.known_minimum() +
                  0.5 * g0 * (x0 - *oracle.known_minimizer()).squaredNorm();
  }

  Vector g = oracle.gradient(state.x);
  const auto log_state = [&]() {
    std::optional<double> env;
    if (bound_scale) env = state.lambda * *bound_scale;
    run.trajectory.records.push_back(
        {state.k, state.x, state.f_x, g.norm(), env, nanos_since(t0)});
    run.states.push_back(state);
  };
  log_state();

  for (int k = 0; k < max_iter; ++k) {
    if (g.norm() <= grad_tol) break;
    state = wes_step(oracle, params, state, variant, &run.history.steps);
    g = oracle.gradient(state.x);
    log_state();
  }
  return run;
}

Trajectory agd_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
                   std::optional<double> gamma0, int max_iter, double grad_tol,
                   const WesVariant& variant) {
  return agd_run_recorded(oracle, params, x0, gamma0, max_iter, grad_tol, variant).trajectory;
}

double lambda_envelope(const ClassParams& params, double gamma0, int k) {
  if (k < 0) throw InvalidInput("lambda_envelope: k must be >= 0");
  const double floor = params.mu / params.gamma;
  if (gamma0 * (1.0 + 1e-12) < floor)
    throw InvalidInput("lambda_envelope: needs gamma0 >= mu/gamma");
  const double linear =
      std::pow(1.0 - std::sqrt(params.mu * params.gamma * params.gamma / params.L), k);
  const double rootL = std::sqrt(params.L);
  const double denom = 2.0 * rootL + params.gamma * k * std::sqrt(gamma0);
  const double sublinear = 4.0 * params.L / (denom * denom);
  return std::min(linear, sublinear);
}

double phi_consistency_probe(const WesHistory& history, const std::vector<Vector>& probes) {
  if (history.v0.size() == 0)
    throw InvalidInput("phi_consistency_probe: history carries no initial state");
  if (probes.empty()) throw InvalidInput("phi_consistency_probe: probes must be nonempty");

  const double gamma = history.gamma;
  const double mu = history.mu;

  double gk = history.gamma0;
  Vector vk = history.v0;
  double mk = history.phi0_star;
  std::vector<double> recursive(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i)
    recursive[i] = mk + 0.5 * gk * (probes[i] - vk).squaredNorm();

  double max_err = 0.0;
  const auto compare = [&]() {
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const double canonical = mk + 0.5 * gk * (probes[i] - vk).squaredNorm();
      max_err = std::max(max_err, std::abs(canonical - recursive[i]));
    }
  };
  compare();

  for (const WesHistoryStep& step : history.steps) {
    const double a = step.alpha;
    const double gnext = (1.0 - a) * gk + a * mu;
    const Vector vy = vk - step.y;
    const Vector vnext =
        ((1.0 - a) * gk * vk + a * mu * step.y - (a / gamma) * step.grad_y) / gnext;
    const double mnext =
        (1.0 - a) * mk + a * step.f_y -
        a * a / (2.0 * gamma * gamma * gnext) * step.grad_y.squaredNorm() +
        (a * (1.0 - a) * gk / gnext) *
            (mu / (2.0 * gamma) * vy.squaredNorm() + step.grad_y.dot(vy) / gamma);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const Vector py = probes[i] - step.y;
      const double q =
          step.f_y + step.grad_y.dot(py) / gamma + 0.5 * mu * py.squaredNorm();
      recursive[i] = (1.0 - a) * recursive[i] + a * q;
    }
    gk = gnext;
    vk = vnext;
    mk = mnext;
    compare();
  }
  return max_err;
}

std::string WesHistory::to_json(int indent) const {
  nlohmann::json j;
  j["gamma0"] = gamma0;
  j["phi0_star"] = phi0_star;
  j["v0"] = std::vector<double>(v0.data(), v0.data() + v0.size());
  j["gamma"] = gamma;
  j["mu"] = mu;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json js;
    js["y"] = std::vector<double>(s.y.data(), s.y.data() + s.y.size());
    js["grad_y"] = std::vector<double>(s.grad_y.data(), s.grad_y.data() + s.grad_y.size());
    js["f_y"] = s.f_y;
    js["alpha"] = s.alpha;
    j["steps"].push_back(js);
  }
  return j.dump(indent);
}

WesHistory WesHistory::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  WesHistory h;
  h.gamma0 = j.at("gamma0").get<double>();
  h.phi0_star = j.at("phi0_star").get<double>();
  const auto v0 = j.at("v0").get<std::vector<double>>();
  h.v0 = Eigen::Map<const Vector>(v0.data(), static_cast<Eigen::Index>(v0.size()));
  h.gamma = j.at("gamma").get<double>();
  h.mu = j.at("mu").get<double>();
  for (const auto& js : j.at("steps")) {
    WesHistoryStep s;
    const auto y = js.at("y").get<std::vector<double>>();
    const auto gy = js.at("grad_y").get<std::vector<double>>();
    s.y = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
    s.grad_y = Eigen::Map<const Vector>(gy.data(), static_cast<Eigen::Index>(gy.size()));
    s.f_y = js.at("f_y").get<double>();
    s.alpha = js.at("alpha").get<double>();
    h.steps.push_back(std::move(s));
  }
  return h;
}

}  // namespace wqc
