#pragma once

#include <utility>
#include <vector>

#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

/// State after k quadratic-averaging steps. Q is the running lower quadratic
/// with curvature mu; its minimum value m = Q.m never decreases and never
/// exceeds f*.
struct OqaState {
  int k = 0;
  Vector x;
  Vector x_plus;
  Quadratic Q;
  double f_x_plus = 0.0;
  double best_value = 0.0;
};

/// x - (1/L) grad f(x).
Vector grad_step(ObjectiveOracle& oracle, double L, const Vector& x);

/// Completed-square form of the lower estimate
///   f(x_bar) + (1/gamma) <grad f(x_bar), x - x_bar> + (mu/2) ||x - x_bar||^2:
/// minimum m = f(x_bar) - ||grad f(x_bar)||^2 / (2 mu gamma^2) at center
/// x_bar - (1/(mu gamma)) grad f(x_bar), curvature mu. Underestimates f(x*).
Quadratic lower_quadratic(ObjectiveOracle& oracle, double gamma, double mu,
                          const Vector& x_bar);

/// Convex combination lambda A + (1 - lambda) B of two quadratics with equal
/// curvature, with lambda in [0, 1] maximizing the combined minimum value
///   m(lambda) = lambda m_A + (1-lambda) m_B
///             + (mu/2) lambda (1-lambda) ||c_A - c_B||^2.
/// lambda = 0 is feasible, so the result never falls below B's minimum.
std::pair<Quadratic, double> optimal_average(const Quadratic& A, const Quadratic& B);

struct OqaRun {
  Trajectory trajectory;            // record k logs x_k^+ and f(x_k^+)
  std::vector<OqaState> states;
  std::vector<double> gaps;         // f(x_k^+) - m_k per iteration
};

/// Optimal quadratic averaging (mu > 0 only): each iteration line-searches
/// [c_{k-1}, x_{k-1}^+], forms the lower quadratic there and averages it into
/// the running model. Stops when the gap f(x_k^+) - m_k reaches gap_tol.
/// The trajectory envelope column carries m_k + rate^k gap_0 with
/// rate = 1 - sqrt(mu gamma^2 / L).
OqaRun oqa_run(ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
               int max_iter, double gap_tol);

}  // namespace wqc
