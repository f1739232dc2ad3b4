#pragma once

#include <functional>
#include <utility>

#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

struct GoldenSectionResult {
  double t = 0.0;
  double value = 0.0;
  int evals = 0;
};

/// Golden-section minimization of f1d over [a, b]. Returns a point within tol
/// of a local minimizer (the global one when f1d is unimodal). Never
/// evaluates outside [a, b]; uses at most max_iter + 2 evaluations.
GoldenSectionResult golden_section_min(const std::function<double(double)>& f1d,
                                       double a, double b, double tol,
                                       int max_iter = 200);

struct SegmentSearchResult {
  double t = 0.0;  // point = p + t (q - p)
  Vector point;
  double value = 0.0;
  int evals = 0;
};

/// Accepts a candidate y before the exact search runs (see segment_min).
using SegmentAcceptFn = std::function<bool(const SegmentSearchResult&)>;

/// Minimizes f over the segment {p + t (q - p) : t in [0, 1]}.
///
/// With an accept callback, the cheap candidates t = 1 and t = 0 are tried
/// first and returned when the callback passes; otherwise (and always without
/// a callback) golden section runs and the best of the interior point and the
/// two endpoints is returned, so value <= min(f(p), f(q)) + tol.
SegmentSearchResult segment_min(ObjectiveOracle& oracle, const Vector& p, const Vector& q,
                                double tol = 1e-10,
                                const SegmentAcceptFn& accept = nullptr);

/// Tests the acceleration line-search condition at y_k:
///   f(x_k) + (a_k g_k)/(g_{k+1} gamma) <grad f(y_k), v_k - y_k>
///          + (a_k g_k mu)/(2 g_{k+1}) ||y_k - v_k||^2  >=  f(y_k).
/// Returns (holds, slack) with slack = LHS - f(y_k) and
/// holds = slack >= -1e-9 (1 + |f(y_k)|).
std::pair<bool, double> check_y_condition(ObjectiveOracle& oracle, const Vector& x_k,
                                          const Vector& v_k, const Vector& y_k,
                                          double alpha_k, double gamma_k,
                                          double gamma_next, double gamma, double mu);

/// Same test on precomputed values (avoids re-querying the oracle).
std::pair<bool, double> y_condition_slack(double f_xk, double f_yk, const Vector& grad_yk,
                                          const Vector& v_k, const Vector& y_k,
                                          double alpha_k, double gamma_k,
                                          double gamma_next, double gamma, double mu);

}  // namespace wqc
