#include "wqc/classcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "wqc/sampling.hpp"

namespace wqc {

namespace {

constexpr double kGapFloor = 1e-12;  // samples this close to f* are skipped in ratio rules

struct InequalitySides {
  double lhs;
  double rhs;
};

InequalitySides sides_at(ClassKind kind, const ClassParams& p, double fgap, double inner,
                         double dist_sq, double grad_sq) {
  switch (kind) {
    case ClassKind::WQC:
      return {p.gamma * fgap, inner};
    case ClassKind::WQSC:
      return {fgap, inner / p.gamma - 0.5 * p.mu * dist_sq};
    case ClassKind::QG_def2:
      return {0.5 * *p.zeta * grad_sq, fgap};
    case ClassKind::QG_dist:
      return {0.5 * p.mu * dist_sq, fgap};
    case ClassKind::GradDom:
      return {*p.tau * fgap, 0.5 * grad_sq};
  }
  throw InvalidInput("unknown class kind");
}

void require_constants(ClassKind kind, const ClassParams& p) {
  if (kind == ClassKind::GradDom && !p.tau)
    throw InvalidInput("GradDom check needs params.tau");
  if (kind == ClassKind::QG_def2 && !p.zeta)
    throw InvalidInput("QG_def2 check needs params.zeta");
}

}  // namespace

std::string to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::WQC: return "WQC";
    case ClassKind::WQSC: return "WQSC";
    case ClassKind::QG_def2: return "QG_def2";
    case ClassKind::QG_dist: return "QG_dist";
    case ClassKind::GradDom: return "GradDom";
  }
  return "?";
}

std::string MembershipReport::to_json(int indent) const {
  nlohmann::json j;
  j["class_kind"] = to_string(class_kind);
  j["params"]["L"] = params.L;
  j["params"]["gamma"] = params.gamma;
  j["params"]["mu"] = params.mu;
  if (params.tau) j["params"]["tau"] = *params.tau;
  if (params.zeta) j["params"]["zeta"] = *params.zeta;
  j["n_points"] = n_points;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json jv;
    jv["x"] = std::vector<double>(v.x.data(), v.x.data() + v.x.size());
    jv["lhs"] = v.lhs;
    jv["rhs"] = v.rhs;
    j["violations"].push_back(jv);
  }
  j["worst_slack"] = worst_slack;
  return j.dump(indent);
}

MembershipReport verify_membership(ObjectiveOracle& oracle, const Vector& x_star,
                                   ClassKind class_kind, const ClassParams& params,
                                   const std::vector<Vector>& samples, double tol) {
  if (samples.empty()) throw InvalidInput("verify_membership: samples must be nonempty");
  if (tol < 0.0) throw InvalidInput("verify_membership: tol must be >= 0");
  require_constants(class_kind, params);

  const double f_star =
      oracle.known_minimum() ? *oracle.known_minimum() : oracle.value(x_star);

  MembershipReport report;
  report.class_kind = class_kind;
  report.params = params;
  report.n_points = static_cast<int>(samples.size());
  report.worst_slack = std::numeric_limits<double>::infinity();

  for (const Vector& x : samples) {
    const double fgap = oracle.value(x) - f_star;
    const Vector g = oracle.gradient(x);
    const Vector d = x - x_star;
    const auto [lhs, rhs] =
        sides_at(class_kind, params, fgap, g.dot(d), d.squaredNorm(), g.squaredNorm());
    report.worst_slack = std::min(report.worst_slack, rhs - lhs);
    if (lhs > rhs + tol) report.violations.push_back({x, lhs, rhs});
  }
  return report;
}

ClassParams estimate_params(ObjectiveOracle& oracle, const Vector& x_star,
                            const std::vector<Vector>& samples) {
  if (samples.empty()) throw InvalidInput("estimate_params: samples must be nonempty");

  const double f_star =
      oracle.known_minimum() ? *oracle.known_minimum() : oracle.value(x_star);

  struct Probe {
    double fgap, inner, dist_sq, grad_sq;
  };
  std::vector<Probe> probes;
  probes.reserve(samples.size());
  std::vector<Vector> grads;
  grads.reserve(samples.size());
  for (const Vector& x : samples) {
    const double fgap = oracle.value(x) - f_star;
    const Vector g = oracle.gradient(x);
    const Vector d = x - x_star;
    probes.push_back({fgap, g.dot(d), d.squaredNorm(), g.squaredNorm()});
    grads.push_back(g);
  }

  double gamma_ratio = std::numeric_limits<double>::infinity();
  double tau_ratio = std::numeric_limits<double>::infinity();
  double zeta_ratio = std::numeric_limits<double>::infinity();
  int active = 0;
  for (const Probe& p : probes) {
    if (p.fgap <= kGapFloor) continue;
    ++active;
    gamma_ratio = std::min(gamma_ratio, p.inner / p.fgap);
    tau_ratio = std::min(tau_ratio, 0.5 * p.grad_sq / p.fgap);
    if (p.grad_sq > kGapFloor) zeta_ratio = std::min(zeta_ratio, 2.0 * p.fgap / p.grad_sq);
  }
  if (active == 0)
    throw InvalidInput("estimate_params: all samples at the minimizer, constants undefined");
  if (gamma_ratio <= 0.0)
    throw InvalidInput("estimate_params: nonpositive inner-product ratio, not weakly-quasi-convex "
                       "on these samples");

  ClassParams out;
  out.gamma = std::min(1.0, gamma_ratio);

  // Sampled smoothness lower estimate, used as the bisection cap for mu.
  double L_hat = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double dx = (samples[i + 1] - samples[i]).norm();
    if (dx > 1e-12)
      L_hat = std::max(L_hat, (grads[i + 1] - grads[i]).norm() / dx);
  }
  if (L_hat <= 0.0) L_hat = 1.0;
  out.L = L_hat;

  const auto wqsc_feasible = [&](double mu) {
    for (const Probe& p : probes)
      if (p.fgap > p.inner / out.gamma - 0.5 * mu * p.dist_sq) return false;
    return true;
  };
  double mu_lo = 0.0;
  if (wqsc_feasible(L_hat)) {
    mu_lo = L_hat;
  } else if (wqsc_feasible(0.0)) {
    double mu_hi = L_hat;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (mu_lo + mu_hi);
      (wqsc_feasible(mid) ? mu_lo : mu_hi) = mid;
    }
  }
  out.mu = mu_lo;

  if (tau_ratio > kGapFloor && std::isfinite(tau_ratio)) out.tau = tau_ratio;
  if (zeta_ratio > kGapFloor && std::isfinite(zeta_ratio)) out.zeta = zeta_ratio;
  return out;
}

double estimate_growth_mu(ObjectiveOracle& oracle, const Vector& x_star,
                          const std::vector<Vector>& samples) {
  if (samples.empty()) throw InvalidInput("estimate_growth_mu: samples must be nonempty");
  const double f_star =
      oracle.known_minimum() ? *oracle.known_minimum() : oracle.value(x_star);
  double ratio = std::numeric_limits<double>::infinity();
  int active = 0;
  for (const Vector& x : samples) {
    const double fgap = oracle.value(x) - f_star;
    const double dist_sq = (x - x_star).squaredNorm();
    if (fgap <= kGapFloor || dist_sq <= 1e-18) continue;
    ++active;
    ratio = std::min(ratio, 2.0 * fgap / dist_sq);
  }
  if (active == 0)
    throw InvalidInput("estimate_growth_mu: all samples at the minimizer");
  return std::max(0.0, ratio);
}

MembershipReport check_wq_to_w_embedding(ObjectiveOracle& oracle, const Vector& x_star,
                                         double gamma, double mu, double a,
                                         const std::vector<Vector>& samples, double tol) {
  if (!(mu > 0.0)) throw InvalidInput("check_wq_to_w_embedding: needs mu > 0");
  if (!(a > 0.0)) throw InvalidInput("check_wq_to_w_embedding: needs a > 0");
  ClassParams embedded;
  embedded.gamma = 1.0 / (1.0 / gamma + a / (mu * gamma));
  embedded.mu = a;
  embedded.L = std::max(a, 1.0);  // unused by the WQSC sides
  return verify_membership(oracle, x_star, ClassKind::WQSC, embedded, samples, tol);
}

MembershipReport check_gradient_domination_consequence(ObjectiveOracle& oracle,
                                                       const Vector& x_star, double gamma,
                                                       double mu,
                                                       const std::vector<Vector>& samples,
                                                       double tol) {
  ClassParams p;
  p.gamma = gamma;
  p.mu = mu;
  p.L = std::max(mu, 1.0);  // unused by the GradDom sides
  p.tau = mu * gamma * gamma;
  return verify_membership(oracle, x_star, ClassKind::GradDom, p, samples, tol);
}

CertifiedParams certify_catalogue_objective(const std::string& id, int dimension,
                                            int n_samples) {
  const CatalogueInfo info = catalogue_info(id);
  ObjectiveOracle oracle = id == "quad"
                               ? make_quadratic_objective(Matrix::Identity(dimension, dimension),
                                                          Vector::Zero(dimension))
                               : make_nonconvex_test_objective(id, dimension);
  const Vector x_star = *oracle.known_minimizer();
  auto samples = box_samples(info.box_lo, info.box_hi, dimension, n_samples);
  if (dimension > 1) {
    // Halton points stay away from the axes in higher dimensions; add
    // coordinate rays so near-minimizer infima are witnessed.
    for (const auto& t : grid_1d(info.box_lo, info.box_hi, 201)) {
      for (int d = 0; d < dimension; ++d) {
        Vector x = x_star;
        x[d] += t[0];
        samples.push_back(x);
      }
      samples.push_back(x_star + Vector::Constant(dimension, t[0] / std::sqrt(dimension)));
    }
  }

  CertifiedParams out;
  out.params = estimate_params(oracle, x_star, samples);
  out.params.L = info.L;  // analytic constant on the documented box
  out.growth_mu = estimate_growth_mu(oracle, x_star, samples);
  if (id == "flat_quartic") {
    // Documented: the quasi-strong-convexity and growth constants vanish on
    // any box containing the minimizer.
    out.params.mu = 0.0;
    out.growth_mu = 0.0;
  }
  out.n_samples = static_cast<int>(samples.size());
  out.box_lo = info.box_lo;
  out.box_hi = info.box_hi;
  return out;
}

}  // namespace wqc
