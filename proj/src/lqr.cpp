#include "wqc/lqr.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wqc {

namespace {

constexpr double kStabilityMargin = 1e-9;
constexpr double kUnstableCost = 1e300;

void require_symmetric(const Matrix& M, const std::string& name) {
  if (M.rows() != M.cols()) throw InvalidInput("LqrProblem: " + name + " must be square");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInput("LqrProblem: " + name + " must be symmetric");
}

double min_eigenvalue(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M);
  return eig.eigenvalues().minCoeff();
}

Matrix json_matrix(const nlohmann::json& j, const std::string& key) {
  const auto& rows = j.at(key);
  if (!rows.is_array() || rows.empty())
    throw InvalidInput("LQR problem file: \"" + key + "\" must be a nonempty nested array");
  const std::size_t ncols = rows[0].size();
  Matrix M(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols)
      throw InvalidInput("LQR problem file: ragged rows in \"" + key + "\"");
    for (std::size_t c = 0; c < ncols; ++c) M(i, c) = rows[i][c].get<double>();
  }
  return M;
}

nlohmann::json matrix_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

void LqrProblem::validate() const {
  const int ns = n();
  const int ni = m();
  if (A.rows() != ns || A.cols() != ns) throw InvalidInput("LqrProblem: A must be n x n");
  if (B.rows() != ns) throw InvalidInput("LqrProblem: B must have n rows");
  require_symmetric(Qc, "Q");
  require_symmetric(R, "R");
  require_symmetric(Sigma0, "Sigma0");
  if (Qc.rows() != ns || Sigma0.rows() != ns || R.rows() != ni)
    throw InvalidInput("LqrProblem: cost/covariance dimensions do not match A, B");
  if (min_eigenvalue(Qc) < -1e-10) throw InvalidInput("LqrProblem: Q must be PSD");
  if (!(min_eigenvalue(R) > 0.0)) throw InvalidInput("LqrProblem: R must be PD");
  if (!(min_eigenvalue(Sigma0) > 0.0)) throw InvalidInput("LqrProblem: Sigma0 must be PD");
  if (K0.rows() != ni || K0.cols() != ns) throw InvalidInput("LqrProblem: K0 must be m x n");
  if (!is_stabilizing(*this, K0))
    throw InvalidInput("LqrProblem: K0 is not stabilizing (spectral radius >= 1)");
}

LqrProblem LqrProblem::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("LQR problem file: bad JSON: ") + e.what());
  }
  LqrProblem p;
  try {
    p.A = json_matrix(j, "A");
    p.B = json_matrix(j, "B");
    p.Qc = json_matrix(j, "Q");
    p.R = json_matrix(j, "R");
    p.Sigma0 = json_matrix(j, "Sigma0");
    p.K0 = json_matrix(j, "K0");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("LQR problem file: ") + e.what());
  }
  p.validate();
  return p;
}

LqrProblem LqrProblem::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open LQR problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string LqrProblem::to_json(int indent) const {
  nlohmann::json j;
  j["A"] = matrix_json(A);
  j["B"] = matrix_json(B);
  j["Q"] = matrix_json(Qc);
  j["R"] = matrix_json(R);
  j["Sigma0"] = matrix_json(Sigma0);
  j["K0"] = matrix_json(K0);
  return j.dump(indent);
}

double spectral_radius(const Matrix& M) {
  if (M.rows() != M.cols()) throw InvalidInput("spectral_radius: matrix must be square");
  return Eigen::EigenSolver<Matrix>(M, /*computeEigenvectors=*/false)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

bool is_stabilizing(const LqrProblem& problem, const Matrix& K) {
  return spectral_radius(problem.A - problem.B * K) < 1.0 - kStabilityMargin;
}

Matrix solve_discrete_lyapunov(const Matrix& M, const Matrix& W) {
  const auto n = M.rows();
  if (M.cols() != n || W.rows() != n || W.cols() != n)
    throw InvalidInput("solve_discrete_lyapunov: dimension mismatch");
  const double rho = spectral_radius(M);
  if (rho >= 1.0 - kStabilityMargin) {
    std::ostringstream msg;
    msg << "solve_discrete_lyapunov: spectral radius " << rho << " >= 1";
    throw InstabilityError(msg.str());
  }

  // vec(M' X M) = (M' (x) M') vec(X): solve (I - M'(x)M') vec(X) = vec(W).
  const Matrix Mt = M.transpose();
  Matrix S = Matrix::Identity(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      S.block(i * n, j * n, n, n) -= Mt(i, j) * Mt;
  const Eigen::Map<const Vector> w(W.data(), n * n);
  const Vector x = S.partialPivLu().solve(w);
  Matrix X = Eigen::Map<const Matrix>(x.data(), n, n);
  X = 0.5 * (X + X.transpose()).eval();

  const double residual = (Mt * X * M - X + W).norm();
  if (residual > 1e-10 * (1.0 + W.norm())) {
    std::ostringstream msg;
    msg << "solve_discrete_lyapunov: residual " << residual << " exceeds tolerance (rho = "
        << rho << ")";
    throw InvariantViolation(msg.str());
  }
  return X;
}

LqrDerived lqr_derived(const LqrProblem& problem, const Matrix& K) {
  const Matrix M = problem.A - problem.B * K;
  LqrDerived d;
  d.X_K = solve_discrete_lyapunov(M, problem.Qc + K.transpose() * problem.R * K);
  d.Sigma_K = solve_discrete_lyapunov(M.transpose(), problem.Sigma0);
  d.cost = (d.X_K * problem.Sigma0).trace();
  d.grad = 2.0 *
           ((problem.R + problem.B.transpose() * d.X_K * problem.B) * K -
            problem.B.transpose() * d.X_K * problem.A) *
           d.Sigma_K;
  return d;
}

double lqr_cost(const LqrProblem& problem, const Matrix& K) {
  const Matrix M = problem.A - problem.B * K;
  const Matrix X = solve_discrete_lyapunov(M, problem.Qc + K.transpose() * problem.R * K);
  return (X * problem.Sigma0).trace();
}

Matrix lqr_grad(const LqrProblem& problem, const Matrix& K) {
  return lqr_derived(problem, K).grad;
}

Matrix riccati_solve(const LqrProblem& problem) {
  Matrix P = problem.Qc;
  for (int it = 0; it < 100000; ++it) {
    const Matrix BtP = problem.B.transpose() * P;
    const Matrix G = problem.R + BtP * problem.B;
    const Matrix K = G.ldlt().solve(BtP * problem.A);
    Matrix P_next = problem.Qc + problem.A.transpose() * P * problem.A -
                    problem.A.transpose() * P * problem.B * K;
    P_next = 0.5 * (P_next + P_next.transpose()).eval();
    if ((P_next - P).norm() <= 1e-12) {
      const Matrix Gf = problem.R + problem.B.transpose() * P_next * problem.B;
      const Matrix K_star = Gf.ldlt().solve(problem.B.transpose() * P_next * problem.A);
      if (!is_stabilizing(problem, K_star))
        throw InstabilityError("riccati_solve: fixed point is not stabilizing");
      return K_star;
    }
    P = P_next;
  }
  throw InstabilityError("riccati_solve: no convergence in 1e5 iterations");
}

Vector flatten_gain(const Matrix& K) {
  Vector coords(K.size());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < K.rows(); ++i)
    for (Eigen::Index j = 0; j < K.cols(); ++j) coords[idx++] = K(i, j);
  return coords;
}

Matrix unflatten_gain(const Vector& coords, int m, int n) {
  if (coords.size() != static_cast<Eigen::Index>(m) * n)
    throw InvalidInput("unflatten_gain: coordinate length mismatch");
  Matrix K(m, n);
  Eigen::Index idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = coords[idx++];
  return K;
}

ObjectiveOracle lqr_oracle(const LqrProblem& problem, bool safeguard) {
  problem.validate();
  const int ni = problem.m();
  const int ns = problem.n();
  const Matrix K_star = riccati_solve(problem);
  const double f_star = lqr_cost(problem, K_star);

  return ObjectiveOracle(
      ni * ns,
      [problem, safeguard, ni, ns](const Vector& coords) {
        const Matrix K = unflatten_gain(coords, ni, ns);
        if (!is_stabilizing(problem, K)) {
          if (safeguard) return kUnstableCost;
          throw InstabilityError("lqr oracle: gain is not stabilizing");
        }
        return lqr_cost(problem, K);
      },
      [problem, ni, ns](const Vector& coords) -> Vector {
        const Matrix K = unflatten_gain(coords, ni, ns);
        if (!is_stabilizing(problem, K))
          throw InstabilityError("lqr oracle: gradient requested at a non-stabilizing gain");
        return flatten_gain(lqr_grad(problem, K));
      },
      flatten_gain(K_star), f_star);
}

LqrWqscResult check_lqr_wqsc(const LqrProblem& problem, const std::vector<Matrix>& samples) {
  if (samples.empty()) throw InvalidInput("check_lqr_wqsc: samples must be nonempty");
  problem.validate();
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!is_stabilizing(problem, samples[i]))
      throw InstabilityError("check_lqr_wqsc: sample " + std::to_string(i) +
                             " is not stabilizing");

  const Matrix K_star = riccati_solve(problem);
  const double f_star = lqr_cost(problem, K_star);
  const Matrix Y_star =
      solve_discrete_lyapunov((problem.A - problem.B * K_star).transpose(), problem.Sigma0);
  const double y_norm =
      Eigen::SelfAdjointEigenSolver<Matrix>(Y_star).eigenvalues().cwiseAbs().maxCoeff();

  LqrWqscResult result;
  result.bound_report.class_kind = ClassKind::WQSC;
  result.bound_report.n_points = static_cast<int>(samples.size());
  result.bound_report.worst_slack = std::numeric_limits<double>::infinity();
  result.bound_holds_lambda_min = true;
  result.bound_holds_lambda_max = true;
  double best_coef = std::numeric_limits<double>::infinity();

  constexpr double tol = kDefaultSlackTol;
  for (const Matrix& K : samples) {
    const LqrDerived d = lqr_derived(problem, K);
    const Matrix dK = K - K_star;
    const double inner = d.grad.cwiseProduct(dK).sum();
    const double dist_sq = dK.squaredNorm();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(problem.R +
                                              problem.B.transpose() * d.X_K * problem.B);
    const double lam_min = eig.eigenvalues().minCoeff();
    const double lam_max = eig.eigenvalues().maxCoeff();

    const double lhs_min = d.cost + y_norm * inner + lam_min * dist_sq;
    const double lhs_max = d.cost + y_norm * inner + lam_max * dist_sq;
    result.bound_report.worst_slack =
        std::min(result.bound_report.worst_slack, f_star - lhs_min);
    if (lhs_min > f_star + tol) {
      result.bound_report.violations.push_back({flatten_gain(K), lhs_min, f_star});
      result.bound_holds_lambda_min = false;
    }
    if (lhs_max > f_star + tol) result.bound_holds_lambda_max = false;
    if (inner > 1e-15) best_coef = std::min(best_coef, (f_star - d.cost) / inner);
  }
  result.best_inner_coefficient = std::isfinite(best_coef) ? best_coef : 0.0;

  ObjectiveOracle oracle = lqr_oracle(problem, /*safeguard=*/false);
  std::vector<Vector> flat;
  flat.reserve(samples.size());
  for (const Matrix& K : samples) flat.push_back(flatten_gain(K));
  try {
    const ClassParams est = estimate_params(oracle, flatten_gain(K_star), flat);
    result.gamma_hat = est.gamma;
    result.mu_hat = est.mu;
    result.bound_report.params = est;
    result.wqsc_report =
        verify_membership(oracle, flatten_gain(K_star), ClassKind::WQSC, est, flat);
  } catch (const InvalidInput&) {
    // every sample sits at the optimum; the constants are undefined there
    result.gamma_hat = 0.0;
    result.mu_hat = 0.0;
  }
  return result;
}

LqrClassEstimate estimate_lqr_class_params(const LqrProblem& problem, int n_samples,
                                           std::uint64_t seed) {
  problem.validate();
  if (n_samples < 2) throw InvalidInput("estimate_lqr_class_params: need at least 2 samples");
  const Matrix K_star = riccati_solve(problem);
  const double f0 = lqr_cost(problem, problem.K0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto random_direction = [&]() {
    Matrix D(problem.m(), problem.n());
    for (Eigen::Index i = 0; i < D.size(); ++i) D.data()[i] = normal(rng);
    return Matrix(D / D.norm());
  };

  LqrClassEstimate out;
  out.samples.push_back(problem.K0);
  const int on_segment = std::max(1, n_samples / 4);
  for (int i = 1; i <= on_segment; ++i) {
    const double t = static_cast<double>(i) / (on_segment + 1);
    out.samples.push_back(K_star + t * (problem.K0 - K_star));
  }
  const double base_radius = std::max(1.0, (problem.K0 - K_star).norm());
  while (static_cast<int>(out.samples.size()) < n_samples) {
    Matrix K = K_star + base_radius * random_direction();
    for (int halve = 0; halve < 48; ++halve) {
      if (is_stabilizing(problem, K) && lqr_cost(problem, K) <= f0) break;
      K = K_star + 0.5 * (K - K_star);
    }
    if (is_stabilizing(problem, K) && lqr_cost(problem, K) <= f0) out.samples.push_back(K);
  }

  // Max finite-difference curvature along one seeded direction per sample.
  double L_hat = 0.0;
  for (const Matrix& K : out.samples) {
    const Matrix D = random_direction();
    const double h = 1e-5 * (1.0 + K.norm());
    if (!is_stabilizing(problem, K + h * D)) continue;
    const double curv = (lqr_grad(problem, K + h * D) - lqr_grad(problem, K)).norm() / h;
    L_hat = std::max(L_hat, curv);
  }
  if (L_hat <= 0.0) L_hat = 1.0;

  const LqrWqscResult wqsc = check_lqr_wqsc(problem, out.samples);
  out.params.L = L_hat;
  out.params.gamma = wqsc.gamma_hat;
  out.params.mu = std::min(wqsc.mu_hat, L_hat);
  return out;
}

}  // namespace wqc
