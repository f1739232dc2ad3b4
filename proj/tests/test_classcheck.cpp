#include <cmath>

#include "doctest.h"
#include "wqc/classcheck.hpp"
#include "wqc/sampling.hpp"

using namespace wqc;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

std::vector<Vector> points(std::initializer_list<double> xs) {
  std::vector<Vector> out;
  for (double x : xs) out.push_back(vec1(x));
  return out;
}

ObjectiveOracle unit_quad() {
  return make_quadratic_objective(Matrix::Constant(1, 1, 1.0), vec1(0.0));
}

}  // namespace

TEST_CASE("convex quadratic is weakly-quasi-convex with gamma 1") {
  ObjectiveOracle f = unit_quad();
  ClassParams p;
  p.gamma = 1.0;
  const auto report =
      verify_membership(f, vec1(0.0), ClassKind::WQC, p, points({-2, -1, 0.5, 1, 2}));
  CHECK(report.clean());
  CHECK(report.n_points == 5);
}

TEST_CASE("unit quadratic satisfies WQSC with equality") {
  ObjectiveOracle f = unit_quad();
  ClassParams p;
  p.gamma = 1.0;
  p.mu = 1.0;
  const auto report =
      verify_membership(f, vec1(0.0), ClassKind::WQSC, p, points({-2, -1, 1, 2}));
  CHECK(report.clean());
  CHECK(report.worst_slack == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("sinsq violates plain weak convexity") {
  ObjectiveOracle f = make_nonconvex_test_objective("sinsq");
  ClassParams p;
  p.gamma = 1.0;
  const auto report =
      verify_membership(f, vec1(0.0), ClassKind::WQC, p, grid_1d(-5.0, 5.0, 201));
  CHECK_FALSE(report.clean());
  // e.g. at x = 2: <f'(2), 2> = 8 + 6 sin 4 < f(2) = 4 + 3 sin^2 2
  const double lhs = 4.0 + 3.0 * std::pow(std::sin(2.0), 2);
  const double rhs = 8.0 + 6.0 * std::sin(4.0);
  CHECK(lhs > rhs);
}

TEST_CASE("estimate_params recovers the quadratic constants") {
  ObjectiveOracle f = unit_quad();
  const ClassParams est = estimate_params(f, vec1(0.0), points({-2, -1, 1, 2}));
  CHECK(est.gamma == doctest::Approx(1.0));
  CHECK(est.mu == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(est.tau.value() == doctest::Approx(1.0));
}

TEST_CASE("estimate_params on flat_quartic finds gamma 1 and vanishing mu") {
  ObjectiveOracle f = make_nonconvex_test_objective("flat_quartic");
  const ClassParams est = estimate_params(f, vec1(0.0), grid_1d(-1.0, 1.0, 10000));
  CHECK(est.gamma == doctest::Approx(1.0));
  CHECK(est.mu <= 1e-6);
}

TEST_CASE("estimate_params matches an independent ratio scan on sinsq") {
  ObjectiveOracle f = make_nonconvex_test_objective("sinsq");
  const auto samples = grid_1d(-5.0, 5.0, 10000);
  const ClassParams est = estimate_params(f, vec1(0.0), samples);

  // Analytic ratio <f'(x), x> / (f(x) - f*) minimized over the same grid.
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double x = s[0];
    const double gap = x * x + 3.0 * std::pow(std::sin(x), 2);
    if (gap <= 1e-12) continue;
    lo = std::min(lo, x * (2.0 * x + 3.0 * std::sin(2.0 * x)) / gap);
  }
  CHECK(est.gamma == doctest::Approx(lo).epsilon(1e-12));
  CHECK(est.gamma == doctest::Approx(0.49609).epsilon(1e-4));
  CHECK(est.gamma > 0.0);
  CHECK(est.gamma < 1.0);
}

TEST_CASE("estimate_params error paths") {
  ObjectiveOracle f = unit_quad();
  CHECK_THROWS_AS(estimate_params(f, vec1(0.0), {}), InvalidInput);
  CHECK_THROWS_AS(estimate_params(f, vec1(0.0), points({0.0})), InvalidInput);
  CHECK_THROWS_AS(verify_membership(f, vec1(0.0), ClassKind::WQC, ClassParams{}, {}),
                  InvalidInput);
}

TEST_CASE("missing constants are rejected") {
  ObjectiveOracle f = unit_quad();
  ClassParams p;  // no tau, no zeta
  CHECK_THROWS_AS(verify_membership(f, vec1(0.0), ClassKind::GradDom, p, points({1.0})),
                  InvalidInput);
  CHECK_THROWS_AS(verify_membership(f, vec1(0.0), ClassKind::QG_def2, p, points({1.0})),
                  InvalidInput);
}

TEST_CASE("embedding of growth plus weak convexity into WQSC") {
  ObjectiveOracle f = unit_quad();
  const auto samples = points({-2, -1, 0.5, 1, 2});
  SUBCASE("a = 1 gives gamma' = 1/2") {
    const auto report = check_wq_to_w_embedding(f, vec1(0.0), 1.0, 1.0, 1.0, samples);
    CHECK(report.clean());
    CHECK(report.params.gamma == doctest::Approx(0.5));
    CHECK(report.params.mu == doctest::Approx(1.0));
  }
  SUBCASE("a = mu halves gamma") {
    const auto report = check_wq_to_w_embedding(f, vec1(0.0), 1.0, 1.0, 1.0, samples);
    CHECK(report.params.gamma == doctest::Approx(0.5));
  }
  SUBCASE("tiny a still embeds") {
    const auto report = check_wq_to_w_embedding(f, vec1(0.0), 1.0, 1.0, 1e-6, samples);
    CHECK(report.clean());
  }
  SUBCASE("mu = 0 is rejected") {
    CHECK_THROWS_AS(check_wq_to_w_embedding(f, vec1(0.0), 1.0, 0.0, 1.0, samples),
                    InvalidInput);
  }
}

TEST_CASE("gradient domination consequence") {
  ObjectiveOracle f = unit_quad();
  const auto rep1 = check_gradient_domination_consequence(f, vec1(0.0), 1.0, 1.0,
                                                          points({-2, -1, 1, 2}));
  CHECK(rep1.clean());
  CHECK(rep1.params.tau.value() == doctest::Approx(1.0));

  Vector d(2);
  d << 1.0, 10.0;
  ObjectiveOracle f2 = make_quadratic_objective(Matrix(d.asDiagonal()), Vector::Zero(2));
  const auto rep2 = check_gradient_domination_consequence(f2, Vector::Zero(2), 1.0, 1.0,
                                                          halton_box(-3.0, 3.0, 2, 200));
  CHECK(rep2.clean());
}

TEST_CASE("certified constants re-verify with zero violations") {
  for (const char* id : {"sinsq", "flat_quartic"}) {
    const CertifiedParams cert = certify_catalogue_objective(id, 1, 2000);
    ObjectiveOracle f = make_nonconvex_test_objective(id, 1);
    const auto samples = grid_1d(cert.box_lo, cert.box_hi, 2000);
    const Vector x_star = *f.known_minimizer();

    CHECK(verify_membership(f, x_star, ClassKind::WQC, cert.params, samples).clean());
    CHECK(verify_membership(f, x_star, ClassKind::WQSC, cert.params, samples).clean());
    if (cert.params.tau)
      CHECK(verify_membership(f, x_star, ClassKind::GradDom, cert.params, samples).clean());
    if (cert.params.zeta)
      CHECK(verify_membership(f, x_star, ClassKind::QG_def2, cert.params, samples).clean());
    ClassParams growth = cert.params;
    growth.mu = cert.growth_mu;
    CHECK(verify_membership(f, x_star, ClassKind::QG_dist, growth, samples).clean());
  }
}

TEST_CASE("sinsq growth constant is 2 on its box") {
  ObjectiveOracle f = make_nonconvex_test_objective("sinsq");
  const double mu = estimate_growth_mu(f, vec1(0.0), grid_1d(-5.0, 5.0, 10000));
  CHECK(mu == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("smaller constants never add violations") {
  ObjectiveOracle f = make_nonconvex_test_objective("sinsq");
  const auto samples = grid_1d(-5.0, 5.0, 500);
  ClassParams big;
  big.gamma = 0.8;
  ClassParams small;
  small.gamma = 0.4;
  const auto v_big =
      verify_membership(f, vec1(0.0), ClassKind::WQC, big, samples).violations.size();
  const auto v_small =
      verify_membership(f, vec1(0.0), ClassKind::WQC, small, samples).violations.size();
  CHECK(v_small <= v_big);
}

TEST_CASE("growth consequence constants on quadratics: claimed vs derived") {
  // The W -> growth consequence at coefficient 2 mu gamma^2 fails on the
  // diag(1, c) quadratics (only mu gamma^2 / 2 is implied); the checker must
  // surface exactly that.
  Vector d(2);
  d << 1.0, 4.0;
  ObjectiveOracle f = make_quadratic_objective(Matrix(d.asDiagonal()), Vector::Zero(2));
  const auto samples = halton_box(-5.0, 5.0, 2, 500);

  ClassParams displayed;
  displayed.gamma = 1.0;
  displayed.mu = 4.0;  // f - f* >= 2 mu gamma^2 d^2 with mu_W = 1
  displayed.L = 4.0;
  CHECK_FALSE(verify_membership(f, Vector::Zero(2), ClassKind::QG_dist, displayed, samples)
                  .clean());

  ClassParams derived;
  derived.gamma = 1.0;
  derived.mu = 1.0;  // f - f* >= (mu gamma^2 / 2) d^2
  derived.L = 4.0;
  CHECK(verify_membership(f, Vector::Zero(2), ClassKind::QG_dist, derived, samples).clean());
}

TEST_CASE("report serializes to json with the documented fields") {
  ObjectiveOracle f = unit_quad();
  ClassParams p;
  p.gamma = 1.0;
  const auto report = verify_membership(f, vec1(0.0), ClassKind::WQC, p, points({1.0, 2.0}));
  const std::string json = report.to_json();
  CHECK(json.find("\"class_kind\":\"WQC\"") != std::string::npos);
  CHECK(json.find("\"n_points\":2") != std::string::npos);
  CHECK(json.find("\"worst_slack\"") != std::string::npos);
  CHECK(json.find("\"violations\"") != std::string::npos);
}
