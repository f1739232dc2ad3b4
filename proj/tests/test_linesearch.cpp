#include <cmath>

#include "doctest.h"
#include "wqc/linesearch.hpp"
#include "wqc/sampling.hpp"

using namespace wqc;

namespace {

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

const double kPi = std::acos(-1.0);

}  // namespace

TEST_CASE("golden section finds interior minima") {
  const auto parabola = golden_section_min([](double t) { return (t - 0.3) * (t - 0.3); },
                                           0.0, 1.0, 1e-10);
  CHECK(parabola.t == doctest::Approx(0.3).epsilon(1e-9));

  // t-resolution at a smooth minimum is limited by sqrt(eps / f''), ~3e-9 here
  const auto cosine =
      golden_section_min([](double t) { return std::cos(2.0 * kPi * t); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(cosine.t - 0.5) <= 1e-8);
  CHECK(cosine.value == doctest::Approx(-1.0));
}

TEST_CASE("golden section handles boundary minimizers") {
  const auto linear = golden_section_min([](double t) { return t; }, 0.0, 1.0, 1e-10);
  CHECK(linear.t <= 1e-9);
}

TEST_CASE("golden section respects its evaluation budget and bounds") {
  int calls = 0;
  double lo = 10.0, hi = -10.0;
  const auto probe = [&](double t) {
    ++calls;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    return std::sin(13.0 * t);
  };
  const int max_iter = 37;
  const auto r = golden_section_min(probe, 0.25, 0.75, 1e-12, max_iter);
  CHECK(calls <= max_iter + 2);
  CHECK(r.evals == calls);
  CHECK(lo >= 0.25);
  CHECK(hi <= 0.75);
}

TEST_CASE("golden section input validation") {
  const auto f = [](double t) { return t * t; };
  CHECK_THROWS_AS(golden_section_min(f, 1.0, 0.0, 1e-10), InvalidInput);
  CHECK_THROWS_AS(golden_section_min(f, 0.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("segment_min on a quadratic valley") {
  ObjectiveOracle f = make_quadratic_objective(Matrix::Identity(2, 2), Vector::Zero(2));
  Vector p(2), q(2);
  p << -1.0, 0.0;
  q << 1.0, 0.0;
  const auto r = segment_min(f, p, q);
  CHECK(r.t == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.point.norm() <= 1e-7);
  CHECK(r.value <= 1e-10);
}

TEST_CASE("segment_min degenerate and boundary cases") {
  ObjectiveOracle quartic = make_nonconvex_test_objective("flat_quartic");
  SUBCASE("p == q returns t = 0") {
    const auto r = segment_min(quartic, vec1(2.0), vec1(2.0));
    CHECK(r.t == 0.0);
    CHECK(r.point[0] == 2.0);
  }
  SUBCASE("monotone decrease toward q lands on t = 1") {
    const auto r = segment_min(quartic, vec1(2.0), vec1(1.0));
    CHECK(r.t == 1.0);
    CHECK(r.point[0] == 1.0);
    CHECK(r.value == doctest::Approx(1.0));
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(segment_min(quartic, Vector::Zero(2), vec1(1.0)), InvalidInput);
  }
}

TEST_CASE("segment_min beats both endpoints up to tol") {
  ObjectiveOracle sinsq = make_nonconvex_test_objective("sinsq", 2);
  const auto ps = halton_box(-4.0, 4.0, 2, 10);
  const auto qs = halton_box(-4.0, 4.0, 2, 10);
  for (const auto& p : ps)
    for (const auto& q : qs) {
      const auto r = segment_min(sinsq, p, q, 1e-10);
      CHECK(r.value <= std::min(sinsq.value(p), sinsq.value(q)) + 1e-10);
      CHECK(r.t >= 0.0);
      CHECK(r.t <= 1.0);
    }
}

TEST_CASE("segment minimizers satisfy the first-order conditions") {
  // q plays x_k, p plays v_k: f(y) <= f(x_k) and <grad f(y), v_k - y> >= -tol.
  for (const char* id : {"sinsq", "flat_quartic"}) {
    ObjectiveOracle f = make_nonconvex_test_objective(id, 2);
    const auto xs = halton_box(-1.0, 1.0, 2, 10);
    const auto vs = halton_box(-0.9, 0.9, 2, 10);
    for (const auto& x : xs)
      for (const auto& v : vs) {
        const auto r = segment_min(f, v, x, 1e-10);
        CHECK(r.value <= f.value(x) + 1e-10);
        const Vector g = f.gradient(r.point);
        const Vector vy = v - r.point;
        CHECK(g.dot(vy) >= -1e-8 * (1.0 + g.norm() * vy.norm()));
      }
  }
}

TEST_CASE("y condition holds at cheap and exact candidates") {
  ObjectiveOracle quad = make_quadratic_objective(Matrix::Constant(1, 1, 1.0), vec1(0.0));

  SUBCASE("y = x_k with favorable inner product") {
    // v - x points uphill from x: <grad f(x), v - x> >= 0.
    const auto [holds, slack] =
        check_y_condition(quad, vec1(1.0), vec1(2.0), vec1(1.0), 0.5, 1.0, 1.0, 1.0, 0.0);
    CHECK(holds);
    CHECK(slack >= 0.0);
  }

  SUBCASE("midpoint minimizer gives slack f(x_k) - f(y)") {
    // grad f(0) = 0, so with mu = 0 the slack is exactly f(1) - f(0) = 0.5
    const auto [holds, slack] =
        check_y_condition(quad, vec1(1.0), vec1(-1.0), vec1(0.0), 0.5, 1.0, 1.0, 1.0, 0.0);
    CHECK(holds);
    CHECK(slack == doctest::Approx(0.5));
  }

  SUBCASE("gamma_next must be positive") {
    CHECK_THROWS_AS(
        check_y_condition(quad, vec1(1.0), vec1(0.0), vec1(1.0), 0.5, 1.0, 0.0, 1.0, 0.0),
        InvalidInput);
  }
}

TEST_CASE("exact segment minimizer always passes the y condition") {
  for (const char* id : {"sinsq", "flat_quartic"}) {
    ObjectiveOracle f = make_nonconvex_test_objective(id, 2);
    const auto xs = halton_box(-1.0, 1.0, 2, 7);
    const auto vs = halton_box(-0.8, 0.8, 2, 7);
    const double alpha = 0.3, gamma_k = 1.0, gamma_next = 0.9, gamma = 0.8, mu = 0.1;
    for (const auto& x : xs)
      for (const auto& v : vs) {
        const auto r = segment_min(f, v, x, 1e-12);
        const auto [holds, slack] =
            check_y_condition(f, x, v, r.point, alpha, gamma_k, gamma_next, gamma, mu);
        CHECK(holds);
      }
  }
}
