#include <cmath>
#include <random>

#include "doctest.h"
#include "wqc/oqa.hpp"
#include "wqc/sampling.hpp"

using namespace wqc;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

ClassParams params_of(double L, double gamma, double mu) {
  ClassParams p;
  p.L = L;
  p.gamma = gamma;
  p.mu = mu;
  return p;
}

ObjectiveOracle diag_quad(double c) {
  Vector d(2);
  d << 1.0, c;
  return make_quadratic_objective(Matrix(d.asDiagonal()), Vector::Zero(2));
}

double grid_max(const Quadratic& A, const Quadratic& B, int n) {
  const double d2 = (A.c - B.c).squaredNorm();
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double lam = static_cast<double>(i) / (n - 1);
    best = std::max(best,
                    lam * A.m + (1.0 - lam) * B.m + 0.5 * B.kappa * lam * (1.0 - lam) * d2);
  }
  return best;
}

}  // namespace

TEST_CASE("grad_step pinned values") {
  ObjectiveOracle f1 = make_quadratic_objective(Matrix::Constant(1, 1, 1.0), vec1(0.0));
  CHECK(grad_step(f1, 1.0, vec1(3.0))[0] == 0.0);
  CHECK(grad_step(f1, 1.0, vec1(0.0))[0] == 0.0);

  ObjectiveOracle f2 = diag_quad(4.0);
  const Vector stepped = grad_step(f2, 4.0, Vector::Constant(2, 1.0));
  CHECK(stepped[0] == doctest::Approx(0.75));
  CHECK(stepped[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(grad_step(f2, 0.0, Vector::Constant(2, 1.0)), InvalidInput);
}

TEST_CASE("lower quadratic completes the square") {
  ObjectiveOracle f = make_quadratic_objective(Matrix::Constant(1, 1, 1.0), vec1(0.0));
  SUBCASE("stationary point") {
    const Quadratic q = lower_quadratic(f, 1.0, 1.0, vec1(0.0));
    CHECK(q.m == 0.0);
    CHECK(q.c[0] == 0.0);
    CHECK(q.kappa == 1.0);
  }
  SUBCASE("exact for the matched quadratic") {
    const Quadratic q1 = lower_quadratic(f, 1.0, 1.0, vec1(1.0));
    CHECK(q1.m == doctest::Approx(0.0));
    CHECK(q1.c[0] == doctest::Approx(0.0));
    const Quadratic q2 = lower_quadratic(f, 1.0, 1.0, vec1(2.0));
    CHECK(q2.m == doctest::Approx(0.0));
    CHECK(q2.c[0] == doctest::Approx(0.0));
  }
  SUBCASE("mu = 0 rejected") {
    CHECK_THROWS_AS(lower_quadratic(f, 1.0, 0.0, vec1(1.0)), InvalidInput);
  }
}

TEST_CASE("lower quadratic underestimates f* on certified objectives") {
  ObjectiveOracle f = diag_quad(10.0);
  for (const Vector& x : halton_box(-4.0, 4.0, 2, 100)) {
    const Quadratic q = lower_quadratic(f, 1.0, 1.0, x);
    CHECK(q(Vector::Zero(2)) <= 1e-9);
  }
}

TEST_CASE("optimal averaging pinned cases") {
  SUBCASE("symmetric pair averages at one half") {
    Quadratic A{0.0, Vector::Zero(2), 1.0};
    Quadratic B{0.0, 2.0 * Vector::Unit(2, 0), 1.0};
    const auto [Q, lam] = optimal_average(A, B);
    CHECK(lam == doctest::Approx(0.5));
    CHECK(Q.m == doctest::Approx(0.5));
    CHECK(Q.c[0] == doctest::Approx(1.0));
    CHECK(Q.c[1] == doctest::Approx(0.0));
  }
  SUBCASE("identical inputs return B unchanged at lambda 0") {
    Quadratic A{0.3, Vector::Constant(2, 1.0), 2.0};
    const auto [Q, lam] = optimal_average(A, A);
    CHECK(lam == 0.0);
    CHECK(Q.m == 0.3);
  }
  SUBCASE("dominant A clamps to lambda 1") {
    Quadratic A{10.0, Vector::Zero(1), 1.0};
    Quadratic B{0.0, Vector::Constant(1, 1.0), 1.0};
    const auto [Q, lam] = optimal_average(A, B);
    CHECK(lam == 1.0);
    CHECK(Q.m == doctest::Approx(10.0));
    CHECK(Q.c[0] == doctest::Approx(0.0));
  }
  SUBCASE("curvature mismatch rejected") {
    Quadratic A{0.0, Vector::Zero(1), 1.0};
    Quadratic B{0.0, Vector::Zero(1), 1.5};
    CHECK_THROWS_AS(optimal_average(A, B), InvalidInput);
  }
}

TEST_CASE("optimal averaging matches a lambda grid search") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-0.15, 0.15);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    Quadratic A, B;
    A.kappa = B.kappa = (i % 2) ? 1.0 : 2.0;
    A.c = Vector(2);
    B.c = Vector(2);
    A.c << coord(rng), coord(rng);
    B.c << coord(rng), coord(rng);
    A.m = level(rng);
    B.m = level(rng) * 0.01;
    const auto [Q, lam] = optimal_average(A, B);
    CHECK(std::abs(Q.m - grid_max(A, B, 10000)) <= 1e-9);
    CHECK(Q.m >= B.m - 1e-15);
  }
}

TEST_CASE("matched quadratic certifies its optimum immediately") {
  ObjectiveOracle f = make_quadratic_objective(Matrix::Constant(1, 1, 1.0), vec1(0.0));
  const OqaRun run = oqa_run(f, params_of(1.0, 1.0, 1.0), vec1(5.0), 100, 0.0);
  CHECK(run.trajectory.size() == 1);
  CHECK(run.states[0].Q.m == doctest::Approx(0.0));
  CHECK(run.states[0].Q.c[0] == doctest::Approx(0.0));
  CHECK(run.gaps[0] == doctest::Approx(0.0));
}

TEST_CASE("starting at the minimizer certifies immediately") {
  ObjectiveOracle f = diag_quad(10.0);
  const OqaRun run = oqa_run(f, params_of(10.0, 1.0, 1.0), Vector::Zero(2), 100, 0.0);
  CHECK(run.trajectory.size() == 1);
  CHECK(run.states[0].Q.m == doctest::Approx(0.0));
}

TEST_CASE("gap contracts at the stated rate on diag(1,10)") {
  ObjectiveOracle f = diag_quad(10.0);
  const OqaRun run =
      oqa_run(f, params_of(10.0, 1.0, 1.0), Vector::Constant(2, 3.0), 300, 0.0);
  const double rate = 1.0 - std::sqrt(0.1);
  const double gap0 = run.gaps.front();
  double prev_m = -std::numeric_limits<double>::infinity();
  double prev_best = std::numeric_limits<double>::infinity();
  for (const OqaState& s : run.states) {
    CHECK(run.gaps[s.k] <= std::pow(rate, s.k) * gap0 * (1.0 + 1e-9));
    CHECK(s.Q.m >= prev_m - 1e-12 * (1.0 + std::abs(prev_m)));
    CHECK(s.Q.m <= 1e-9);
    CHECK(s.best_value <= prev_best + 1e-15);
    CHECK(s.Q.kappa == 1.0);
    prev_m = s.Q.m;
    prev_best = s.best_value;
  }
}

TEST_CASE("oqa rejects mu = 0 and bad starts") {
  ObjectiveOracle f = diag_quad(10.0);
  CHECK_THROWS_AS(oqa_run(f, params_of(10.0, 1.0, 0.0), Vector::Constant(2, 1.0), 10, 0.0),
                  InvalidInput);
  Vector bad(2);
  bad << std::nan(""), 0.0;
  CHECK_THROWS_AS(oqa_run(f, params_of(10.0, 1.0, 1.0), bad, 10, 0.0), InvalidInput);
}

TEST_CASE("overstated mu breaks the lower-bound certificate") {
  // mu far above the true quasi-strong-convexity constant makes the lower
  // quadratics cross above f* = 0, so m_k stops being a valid certificate.
  ObjectiveOracle f = diag_quad(10.0);
  const OqaRun run = oqa_run(f, params_of(10.0, 1.0, 9.0), Vector::Constant(2, 3.0), 300, 0.0);
  double max_m = -std::numeric_limits<double>::infinity();
  for (const OqaState& s : run.states) max_m = std::max(max_m, s.Q.m);
  CHECK(max_m > 1e-9);
}
