#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "wqc/errors.hpp"

namespace wqc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smoothness / weak-quasi-convexity constants of an objective.
///   L     gradient Lipschitz constant, > 0
///   gamma weak-quasi-convexity constant, in (0, 1]
///   mu    quasi-strong-convexity / quadratic-growth constant, >= 0
///   tau   optional gradient-domination constant
///   zeta  optional gradient-norm growth constant
struct ClassParams {
  double L = 1.0;
  double gamma = 1.0;
  double mu = 0.0;
  std::optional<double> tau;
  std::optional<double> zeta;

  void validate() const {
    if (!(L > 0.0)) throw InvalidInput("ClassParams: L must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidInput("ClassParams: gamma must be in (0, 1]");
    if (!(mu >= 0.0)) throw InvalidInput("ClassParams: mu must be >= 0");
    if (mu > L) throw InvalidInput("ClassParams: mu cannot exceed L");
    if (tau && !(*tau > 0.0)) throw InvalidInput("ClassParams: tau must be > 0");
    if (zeta && !(*zeta > 0.0)) throw InvalidInput("ClassParams: zeta must be > 0");
  }
};

/// Isotropic quadratic q(x) = m + (kappa/2) ||x - c||^2.
struct Quadratic {
  double m = 0.0;
  Vector c;
  double kappa = 1.0;

  double operator()(const Vector& x) const {
    return m + 0.5 * kappa * (x - c).squaredNorm();
  }
};

struct TrajectoryRecord {
  int k = 0;
  Vector x;
  double f = 0.0;
  double grad_norm = 0.0;
  std::optional<double> envelope;
  std::int64_t wall_nanos = 0;
};

/// Per-iteration log of a run. Record k is the state after k steps.
struct Trajectory {
  std::vector<TrajectoryRecord> records;

  std::size_t size() const { return records.size(); }
  const TrajectoryRecord& back() const { return records.back(); }
  const TrajectoryRecord& operator[](std::size_t i) const { return records[i]; }
};

}  // namespace wqc
