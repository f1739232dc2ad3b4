#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "wqc/types.hpp"

namespace wqc {

/// First-order oracle: f(x), grad f(x), plus optional ground truth for tests
/// and envelope checks. Copies are cheap and carry their own call counters,
/// so parallel runs clone one oracle each.
class ObjectiveOracle {
public:
  using EvalFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  ObjectiveOracle(int dimension, EvalFn eval, GradFn grad,
                  std::optional<Vector> known_minimizer = std::nullopt,
                  std::optional<double> known_minimum = std::nullopt)
      : dimension_(dimension),
        eval_(std::move(eval)),
        grad_(std::move(grad)),
        known_minimizer_(std::move(known_minimizer)),
        known_minimum_(known_minimum) {
    if (dimension_ <= 0) throw InvalidInput("oracle dimension must be positive");
  }

  int dimension() const { return dimension_; }

  double value(const Vector& x) {
    check_dim(x);
    ++eval_count_;
    return eval_(x);
  }

  Vector gradient(const Vector& x) {
    check_dim(x);
    ++grad_count_;
    return grad_(x);
  }

  const std::optional<Vector>& known_minimizer() const { return known_minimizer_; }
  std::optional<double> known_minimum() const { return known_minimum_; }

  std::int64_t eval_count() const { return eval_count_; }
  std::int64_t grad_count() const { return grad_count_; }
  void reset_counters() { eval_count_ = grad_count_ = 0; }

  ObjectiveOracle clone() const {
    ObjectiveOracle copy = *this;
    copy.reset_counters();
    return copy;
  }

private:
  void check_dim(const Vector& x) const {
    if (x.size() != dimension_)
      throw InvalidInput("point has dimension " + std::to_string(x.size()) +
                         ", oracle expects " + std::to_string(dimension_));
  }

  int dimension_;
  EvalFn eval_;
  GradFn grad_;
  std::optional<Vector> known_minimizer_;
  std::optional<double> known_minimum_;
  std::int64_t eval_count_ = 0;
  std::int64_t grad_count_ = 0;
};

/// f(x) = 1/2 (x - x*)' H (x - x*) with exact gradient H (x - x*).
/// H must be symmetric positive semidefinite.
ObjectiveOracle make_quadratic_objective(const Matrix& H, const Vector& x_star);

/// Built-in nonconvex test objectives, coordinate-separable in `dimension`:
///   "sinsq"        f(x) = sum_i x_i^2 + 3 sin^2(x_i)
///   "flat_quartic" f(x) = ||x||^4
ObjectiveOracle make_nonconvex_test_objective(const std::string& id, int dimension = 1);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h).
Vector finite_difference_gradient(ObjectiveOracle& oracle, const Vector& x, double h);

/// Documented certification box and analytic constants for a catalogue entry.
struct CatalogueInfo {
  std::string id;
  double box_lo = 0.0;
  double box_hi = 0.0;
  double L = 0.0;  // analytic smoothness constant on the box
};

bool is_catalogue_id(const std::string& id);
CatalogueInfo catalogue_info(const std::string& id);

/// Documented default starting point for a catalogue objective.
Vector default_start(const std::string& id, int dimension);

}  // namespace wqc
