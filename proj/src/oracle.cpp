#include "wqc/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace wqc {

ObjectiveOracle make_quadratic_objective(const Matrix& H, const Vector& x_star) {
  const auto n = x_star.size();
  if (H.rows() != n || H.cols() != n)
    throw InvalidInput("make_quadratic_objective: H is " + std::to_string(H.rows()) + "x" +
                       std::to_string(H.cols()) + " but x_star has length " +
                       std::to_string(n));
  if (!H.isApprox(H.transpose(), 1e-12))
    throw InvalidInput("make_quadratic_objective: H must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw InvalidInput("make_quadratic_objective: H must be positive semidefinite");

  Matrix Hc = 0.5 * (H + H.transpose());
  return ObjectiveOracle(
      static_cast<int>(n),
      [Hc, x_star](const Vector& x) {
        Vector d = x - x_star;
        return 0.5 * d.dot(Hc * d);
      },
      [Hc, x_star](const Vector& x) -> Vector { return Hc * (x - x_star); }, x_star, 0.0);
}

ObjectiveOracle make_nonconvex_test_objective(const std::string& id, int dimension) {
  if (dimension <= 0) throw InvalidInput("objective dimension must be positive");
  Vector zero = Vector::Zero(dimension);

  if (id == "sinsq") {
    // f(x) = sum_i x_i^2 + 3 sin^2 x_i; f' per coordinate = 2x + 3 sin(2x)
    return ObjectiveOracle(
        dimension,
        [](const Vector& x) {
          double f = 0.0;
          for (double xi : x) f += xi * xi + 3.0 * std::sin(xi) * std::sin(xi);
          return f;
        },
        [](const Vector& x) -> Vector {
          Vector g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i)
            g[i] = 2.0 * x[i] + 3.0 * std::sin(2.0 * x[i]);
          return g;
        },
        zero, 0.0);
  }
  if (id == "flat_quartic") {
    // f(x) = ||x||^4, grad = 4 ||x||^2 x; mu = 0, L = 12 r^2 on ||x|| <= r
    return ObjectiveOracle(
        dimension, [](const Vector& x) { return std::pow(x.squaredNorm(), 2); },
        [](const Vector& x) -> Vector { return 4.0 * x.squaredNorm() * x; }, zero, 0.0);
  }
  throw InvalidInput("unknown test objective id: " + id);
}

Vector finite_difference_gradient(ObjectiveOracle& oracle, const Vector& x, double h) {
  if (!(h > 0.0)) throw InvalidInput("finite_difference_gradient: h must be > 0");
  Vector g(oracle.dimension());
  Vector xp = x;
  for (int i = 0; i < oracle.dimension(); ++i) {
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = oracle.value(xp);
    xp[i] = xi - h;
    const double fm = oracle.value(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

bool is_catalogue_id(const std::string& id) {
  return id == "quad" || id == "sinsq" || id == "flat_quartic";
}

CatalogueInfo catalogue_info(const std::string& id) {
  // Certification boxes; L is the analytic smoothness constant there.
  // sinsq: f'' = 2 + 6 cos(2x) <= 8 everywhere.
  // flat_quartic: ||hess|| = 12 ||x||^2 <= 12 on the unit ball.
  if (id == "sinsq") return {id, -5.0, 5.0, 8.0};
  if (id == "flat_quartic") return {id, -1.0, 1.0, 12.0};
  if (id == "quad") return {id, -5.0, 5.0, 1.0};  // L = lambda_max(H) for actual instances
  throw InvalidInput("unknown catalogue id: " + id);
}

Vector default_start(const std::string& id, int dimension) {
  if (dimension <= 0) throw InvalidInput("objective dimension must be positive");
  if (id == "flat_quartic") {
    // Start on the 0.9-sphere so 1/L steps stay inside the certified unit ball.
    return Vector::Constant(dimension, 0.9 / std::sqrt(static_cast<double>(dimension)));
  }
  if (is_catalogue_id(id)) return Vector::Constant(dimension, 3.0);
  throw InvalidInput("unknown catalogue id: " + id);
}

}  // namespace wqc
