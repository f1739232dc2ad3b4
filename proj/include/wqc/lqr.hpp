#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wqc/classcheck.hpp"
#include "wqc/oracle.hpp"
#include "wqc/types.hpp"

namespace wqc {

/// Discrete-time LQR data: x_{t+1} = A x_t + B u_t, stage cost
/// x' Qc x + u' R u, initial-state covariance Sigma0. Validated on
/// construction: Qc, R, Sigma0 symmetric, R and Sigma0 positive definite,
/// Qc positive semidefinite.
struct LqrProblem {
  Matrix A;
  Matrix B;
  Matrix Qc;
  Matrix R;
  Matrix Sigma0;
  Matrix K0;  // caller-supplied stabilizing gain (certifies stabilizability)

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  void validate() const;

  /// Reads keys "A","B","Q","R","Sigma0","K0" (row-major nested arrays).
  static LqrProblem from_json(const std::string& text);
  static LqrProblem from_file(const std::string& path);
  std::string to_json(int indent = -1) const;
};

double spectral_radius(const Matrix& M);

/// Closed loop A - B K is Schur stable (spectral radius < 1 - 1e-9).
bool is_stabilizing(const LqrProblem& problem, const Matrix& K);

/// Unique symmetric X with M' X M - X + W = 0, via the n^2 x n^2 Kronecker
/// linear system. Requires spectral radius of M below 1 - 1e-9.
Matrix solve_discrete_lyapunov(const Matrix& M, const Matrix& W);

/// Per-gain derived quantities: value matrix, closed-loop covariance, cost
/// and policy gradient.
struct LqrDerived {
  Matrix X_K;
  Matrix Sigma_K;
  double cost = 0.0;
  Matrix grad;
};

LqrDerived lqr_derived(const LqrProblem& problem, const Matrix& K);

/// f(K) = trace(X_K Sigma0) with X_K from the Lyapunov solve.
double lqr_cost(const LqrProblem& problem, const Matrix& K);

/// grad f(K) = 2 [(R + B' X_K B) K - B' X_K A] Sigma_K.
Matrix lqr_grad(const LqrProblem& problem, const Matrix& K);

/// Optimal gain from the discrete Riccati fixed-point iteration
/// (P <- Qc + A'PA - A'PB (R + B'PB)^{-1} B'PA starting at P = Qc).
Matrix riccati_solve(const LqrProblem& problem);

/// Adapter exposing f(K) over row-major-flattened gains. With safeguard on,
/// eval at an unstable gain returns 1e300 (so minimizers back off) while grad
/// still throws InstabilityError.
ObjectiveOracle lqr_oracle(const LqrProblem& problem, bool safeguard = true);

Vector flatten_gain(const Matrix& K);
Matrix unflatten_gain(const Vector& coords, int m, int n);

/// Outcome of the sampled weak-quasi-strong-convexity check on a gain set.
/// bound_report tests the conjectured lower-bound inequality
///   f(K*) >= f(K) + ||Y*||_2 <grad f(K), K - K*> + lambda_min(R + B'X_K B) ||K - K*||_F^2
/// with Y* the closed-loop covariance at K*; bound_holds_lambda_max is the
/// same test with the largest eigenvalue, and best_inner_coefficient is the
/// largest scalar c for which f(K*) >= f(K) + c <grad f(K), K - K*> holds on
/// every sample. wqsc_report re-verifies the WQSC inequality at the estimated
/// (gamma_hat, mu_hat).
struct LqrWqscResult {
  double gamma_hat = 0.0;
  double mu_hat = 0.0;
  MembershipReport bound_report;
  bool bound_holds_lambda_min = false;
  bool bound_holds_lambda_max = false;
  double best_inner_coefficient = 0.0;
  MembershipReport wqsc_report;
};

LqrWqscResult check_lqr_wqsc(const LqrProblem& problem, const std::vector<Matrix>& samples);

/// Sampled class constants on the sublevel set {K : f(K) <= f(K0)}:
/// L_hat is the max finite-difference curvature along seeded random
/// directions, (gamma_hat, mu_hat) come from check_lqr_wqsc on the sample
/// set. Deterministic for a fixed seed.
struct LqrClassEstimate {
  ClassParams params;
  std::vector<Matrix> samples;
};

LqrClassEstimate estimate_lqr_class_params(const LqrProblem& problem, int n_samples = 50,
                                           std::uint64_t seed = 20240817);

}  // namespace wqc
