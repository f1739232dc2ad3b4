#pragma once

#include <string>
#include <vector>

#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

/// Which defining inequality to test at each sample.
///   WQC      gamma (f(x) - f*) <= <grad f(x), x - x*>
///   WQSC     f(x) - f* <= (1/gamma) <grad f(x), x - x*> - (mu/2) ||x - x*||^2
///   QG_def2  f(x) - f* >= (zeta/2) ||grad f(x)||^2
///   QG_dist  f(x) - f* >= (mu/2)  ||x - x*||^2
///   GradDom  tau (f(x) - f*) <= (1/2) ||grad f(x)||^2
enum class ClassKind { WQC, WQSC, QG_def2, QG_dist, GradDom };

std::string to_string(ClassKind kind);

struct Violation {
  Vector x;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Result of testing one inequality over a sample set. A sample violates when
/// lhs > rhs + tol; worst_slack is the minimum of rhs - lhs over all samples.
struct MembershipReport {
  ClassKind class_kind = ClassKind::WQC;
  ClassParams params;
  int n_points = 0;
  std::vector<Violation> violations;
  double worst_slack = 0.0;

  bool clean() const { return violations.empty(); }
  std::string to_json(int indent = -1) const;
};

constexpr double kDefaultSlackTol = 1e-9;

MembershipReport verify_membership(ObjectiveOracle& oracle, const Vector& x_star,
                                   ClassKind class_kind, const ClassParams& params,
                                   const std::vector<Vector>& samples,
                                   double tol = kDefaultSlackTol);

/// Largest constants for which the defining inequalities hold with
/// nonnegative slack on every sample:
///   gamma  min over samples of <grad f, x - x*> / (f - f*), clipped to (0, 1]
///   mu     bisection on [0, L] for the WQSC inequality at that gamma
///   tau    min over samples of (1/2)||grad f||^2 / (f - f*)
///   zeta   min over samples of 2 (f - f*) / ||grad f||^2
/// Samples with f - f* <= 1e-12 are excluded from the ratio rules. L is the
/// max sampled gradient-difference ratio (a lower estimate; callers with an
/// analytic constant should overwrite it).
ClassParams estimate_params(ObjectiveOracle& oracle, const Vector& x_star,
                            const std::vector<Vector>& samples);

/// Largest mu with f - f* >= (mu/2) ||x - x*||^2 on every sample
/// (the distance-form growth constant, used by the WQ-class checks).
double estimate_growth_mu(ObjectiveOracle& oracle, const Vector& x_star,
                          const std::vector<Vector>& samples);

/// Tests the WQ -> W embedding: for f in WQ_{L,gamma,mu} and any a > 0,
/// f is WQSC with gamma' = 1 / (1/gamma + a/(mu gamma)) and mu' = a.
MembershipReport check_wq_to_w_embedding(ObjectiveOracle& oracle, const Vector& x_star,
                                         double gamma, double mu, double a,
                                         const std::vector<Vector>& samples,
                                         double tol = kDefaultSlackTol);

/// Tests the gradient-domination consequence of WQSC membership:
/// mu gamma^2 (f(x) - f*) <= (1/2) ||grad f(x)||^2.
MembershipReport check_gradient_domination_consequence(ObjectiveOracle& oracle,
                                                       const Vector& x_star,
                                                       double gamma, double mu,
                                                       const std::vector<Vector>& samples,
                                                       double tol = kDefaultSlackTol);

/// Numerically certified constants for a catalogue objective on its
/// documented box: estimate_params over a deterministic grid, with the
/// analytic L and the distance-form growth constant alongside.
struct CertifiedParams {
  ClassParams params;    // L analytic, gamma/mu/tau/zeta estimated
  double growth_mu = 0.0;  // distance-form quadratic-growth constant
  int n_samples = 0;
  double box_lo = 0.0;
  double box_hi = 0.0;
};

CertifiedParams certify_catalogue_objective(const std::string& id, int dimension,
                                            int n_samples = 10000);

}  // namespace wqc
