#include "wqc/linesearch.hpp"

#include <cmath>

namespace wqc {

GoldenSectionResult golden_section_min(const std::function<double(double)>& f1d, double a,
                                       double b, double tol, int max_iter) {
  if (!(a < b)) throw InvalidInput("golden_section_min: needs a < b");
  if (!(tol > 0.0)) throw InvalidInput("golden_section_min: needs tol > 0");

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * invphi;
  double d = a + (b - a) * invphi;
  double fc = f1d(c);
  double fd = f1d(d);
  int evals = 2;

  for (int iter = 0; iter < max_iter && (b - a) > tol; ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * invphi;
      fc = f1d(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * invphi;
      fd = f1d(d);
    }
    ++evals;
  }
  return fc <= fd ? GoldenSectionResult{c, fc, evals} : GoldenSectionResult{d, fd, evals};
}

SegmentSearchResult segment_min(ObjectiveOracle& oracle, const Vector& p, const Vector& q,
                                double tol, const SegmentAcceptFn& accept) {
  if (p.size() != oracle.dimension() || q.size() != oracle.dimension())
    throw InvalidInput("segment_min: endpoint dimension mismatch");

  int evals = 0;
  const Vector dir = q - p;
  const auto at = [&](double t) {
    SegmentSearchResult r;
    r.t = t;
    r.point = p + t * dir;
    r.value = oracle.value(r.point);
    ++evals;
    r.evals = evals;
    return r;
  };

  if (accept) {
    SegmentSearchResult cand1 = at(1.0);
    if (accept(cand1)) return cand1;
    SegmentSearchResult cand0 = at(0.0);
    if (cand0.value <= cand1.value && accept(cand0)) return cand0;
  }

  const auto gold =
      golden_section_min([&](double t) { return oracle.value(p + t * dir); }, 0.0, 1.0, tol, 200);
  evals += gold.evals;

  SegmentSearchResult best = at(0.0);
  const SegmentSearchResult end1 = at(1.0);
  if (end1.value < best.value) best = end1;
  if (gold.value < best.value) {
    best.t = gold.t;
    best.point = p + gold.t * dir;
    best.value = gold.value;
  }
  best.evals = evals;
  return best;
}

std::pair<bool, double> y_condition_slack(double f_xk, double f_yk, const Vector& grad_yk,
                                          const Vector& v_k, const Vector& y_k, double alpha_k,
                                          double gamma_k, double gamma_next, double gamma,
                                          double mu) {
  if (!(gamma_next > 0.0)) throw InvalidInput("y condition: gamma_next must be > 0");
  const double ratio = alpha_k * gamma_k / gamma_next;
  const Vector vy = v_k - y_k;
  const double lhs = f_xk + (ratio / gamma) * grad_yk.dot(vy) + 0.5 * ratio * mu * vy.squaredNorm();
  const double slack = lhs - f_yk;
  return {slack >= -1e-9 * (1.0 + std::abs(f_yk)), slack};
}

std::pair<bool, double> check_y_condition(ObjectiveOracle& oracle, const Vector& x_k,
                                          const Vector& v_k, const Vector& y_k, double alpha_k,
                                          double gamma_k, double gamma_next, double gamma,
                                          double mu) {
  const double f_xk = oracle.value(x_k);
  const double f_yk = oracle.value(y_k);
  const Vector grad_yk = oracle.gradient(y_k);
  return y_condition_slack(f_xk, f_yk, grad_yk, v_k, y_k, alpha_k, gamma_k, gamma_next, gamma,
                           mu);
}

}  // namespace wqc
