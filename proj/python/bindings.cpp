#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wqc/bench.hpp"
#include "wqc/classcheck.hpp"
#include "wqc/gd.hpp"
#include "wqc/harness.hpp"
#include "wqc/linesearch.hpp"
#include "wqc/lqr.hpp"
#include "wqc/oqa.hpp"
#include "wqc/oracle.hpp"
#include "wqc/sampling.hpp"
#include "wqc/wes.hpp"

namespace py = pybind11;
using namespace wqc;

namespace {

ClassKind kind_from_string(const std::string& s) {
  if (s == "WQC") return ClassKind::WQC;
  if (s == "WQSC") return ClassKind::WQSC;
  if (s == "QG_def2") return ClassKind::QG_def2;
  if (s == "QG_dist") return ClassKind::QG_dist;
  if (s == "GradDom") return ClassKind::GradDom;
  throw InvalidInput("unknown class kind: " + s);
}

WesVariant variant_from_string(const std::string& s, double gamma) {
  if (s == "agd1") return WesVariant::algorithm1(gamma);
  if (s == "agd2") return WesVariant::algorithm2(gamma);
  throw InvalidInput("unknown accelerated variant: " + s);
}

}  // namespace

PYBIND11_MODULE(_wqc_optim, m) {
  m.doc() = "first-order methods for weakly-quasi-convex objectives";

  py::register_exception<InvalidInput>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<ParameterRegimeError>(m, "ParameterRegimeError", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolationError", PyExc_RuntimeError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);

  py::class_<ClassParams>(m, "ClassParams")
      .def(py::init([](double L, double gamma, double mu, std::optional<double> tau,
                       std::optional<double> zeta) {
             ClassParams p;
             p.L = L;
             p.gamma = gamma;
             p.mu = mu;
             p.tau = tau;
             p.zeta = zeta;
             p.validate();
             return p;
           }),
           py::arg("L"), py::arg("gamma") = 1.0, py::arg("mu") = 0.0,
           py::arg("tau") = std::nullopt, py::arg("zeta") = std::nullopt)
      .def_readwrite("L", &ClassParams::L)
      .def_readwrite("gamma", &ClassParams::gamma)
      .def_readwrite("mu", &ClassParams::mu)
      .def_readwrite("tau", &ClassParams::tau)
      .def_readwrite("zeta", &ClassParams::zeta)
      .def("__repr__", [](const ClassParams& p) { return class_params_to_json(p); });

  py::class_<ObjectiveOracle>(m, "ObjectiveOracle")
      .def_property_readonly("dimension", &ObjectiveOracle::dimension)
      .def("value", &ObjectiveOracle::value, py::arg("x"))
      .def("gradient", &ObjectiveOracle::gradient, py::arg("x"))
      .def_property_readonly("known_minimizer",
                             [](const ObjectiveOracle& o) { return o.known_minimizer(); })
      .def_property_readonly("known_minimum",
                             [](const ObjectiveOracle& o) { return o.known_minimum(); })
      .def_property_readonly("eval_count", &ObjectiveOracle::eval_count)
      .def_property_readonly("grad_count", &ObjectiveOracle::grad_count)
      .def("clone", &ObjectiveOracle::clone);

  m.def("quadratic_objective", &make_quadratic_objective, py::arg("H"), py::arg("x_star"));
  m.def("test_objective", &make_nonconvex_test_objective, py::arg("id"),
        py::arg("dimension") = 1);
  m.def("finite_difference_gradient", &finite_difference_gradient, py::arg("oracle"),
        py::arg("x"), py::arg("h") = 1e-5);
  m.def("default_start", &default_start, py::arg("id"), py::arg("dimension") = 1);

  py::class_<Violation>(m, "Violation")
      .def_readonly("x", &Violation::x)
      .def_readonly("lhs", &Violation::lhs)
      .def_readonly("rhs", &Violation::rhs);

  py::class_<MembershipReport>(m, "MembershipReport")
      .def_property_readonly("class_kind",
                             [](const MembershipReport& r) { return to_string(r.class_kind); })
      .def_readonly("params", &MembershipReport::params)
      .def_readonly("n_points", &MembershipReport::n_points)
      .def_readonly("violations", &MembershipReport::violations)
      .def_readonly("worst_slack", &MembershipReport::worst_slack)
      .def("clean", &MembershipReport::clean)
      .def("to_json", &MembershipReport::to_json, py::arg("indent") = -1);

  m.def(
      "verify_membership",
      [](ObjectiveOracle& oracle, const Vector& x_star, const std::string& kind,
         const ClassParams& params, const std::vector<Vector>& samples, double tol) {
        return verify_membership(oracle, x_star, kind_from_string(kind), params, samples, tol);
      },
      py::arg("oracle"), py::arg("x_star"), py::arg("class_kind"), py::arg("params"),
      py::arg("samples"), py::arg("tol") = kDefaultSlackTol);
  m.def("estimate_params", &estimate_params, py::arg("oracle"), py::arg("x_star"),
        py::arg("samples"));
  m.def("estimate_growth_mu", &estimate_growth_mu, py::arg("oracle"), py::arg("x_star"),
        py::arg("samples"));
  m.def("check_wq_to_w_embedding", &check_wq_to_w_embedding, py::arg("oracle"),
        py::arg("x_star"), py::arg("gamma"), py::arg("mu"), py::arg("a"), py::arg("samples"),
        py::arg("tol") = kDefaultSlackTol);
  m.def("check_gradient_domination_consequence", &check_gradient_domination_consequence,
        py::arg("oracle"), py::arg("x_star"), py::arg("gamma"), py::arg("mu"),
        py::arg("samples"), py::arg("tol") = kDefaultSlackTol);

  m.def("grid_1d", &grid_1d, py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("box_samples", &box_samples, py::arg("lo"), py::arg("hi"), py::arg("dim"),
        py::arg("n"));

  m.def(
      "golden_section_min",
      [](const std::function<double(double)>& f, double a, double b, double tol,
         int max_iter) {
        const auto r = golden_section_min(f, a, b, tol, max_iter);
        return py::make_tuple(r.t, r.value);
      },
      py::arg("f"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-10,
      py::arg("max_iter") = 200);

  py::class_<SegmentSearchResult>(m, "SegmentSearchResult")
      .def_readonly("t", &SegmentSearchResult::t)
      .def_readonly("point", &SegmentSearchResult::point)
      .def_readonly("value", &SegmentSearchResult::value)
      .def_readonly("evals", &SegmentSearchResult::evals);

  m.def(
      "segment_min",
      [](ObjectiveOracle& oracle, const Vector& p, const Vector& q, double tol) {
        return segment_min(oracle, p, q, tol);
      },
      py::arg("oracle"), py::arg("p"), py::arg("q"), py::arg("tol") = 1e-10);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("k", &TrajectoryRecord::k)
      .def_readonly("x", &TrajectoryRecord::x)
      .def_readonly("f", &TrajectoryRecord::f)
      .def_readonly("grad_norm", &TrajectoryRecord::grad_norm)
      .def_readonly("envelope", &TrajectoryRecord::envelope);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("records", &Trajectory::records)
      .def("__len__", [](const Trajectory& t) { return t.size(); })
      .def("f_values", [](const Trajectory& t) {
        std::vector<double> out;
        for (const auto& r : t.records) out.push_back(r.f);
        return out;
      });

  m.def(
      "gd_run",
      [](ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
         const std::string& rule, double fixed_h, int max_iter, double grad_tol) {
        GdConfig cfg;
        if (rule == "one_over_L")
          cfg.stepsize_rule = StepsizeRule::OneOverL;
        else if (rule == "gamma_over_L")
          cfg.stepsize_rule = StepsizeRule::GammaOverL;
        else if (rule == "gamma_over_2L")
          cfg.stepsize_rule = StepsizeRule::GammaOver2L;
        else if (rule == "fixed")
          cfg.stepsize_rule = StepsizeRule::Fixed;
        else
          throw InvalidInput("unknown stepsize rule: " + rule);
        cfg.fixed_h = fixed_h;
        cfg.max_iter = max_iter;
        cfg.grad_tol = grad_tol;
        return gd_run(oracle, params, x0, cfg);
      },
      py::arg("oracle"), py::arg("params"), py::arg("x0"), py::arg("rule") = "one_over_L",
      py::arg("fixed_h") = 0.0, py::arg("max_iter") = 1000, py::arg("grad_tol") = 0.0);

  m.def(
      "gd_envelope",
      [](const ClassParams& params, const std::string& variant, int k, double r0sq,
         double f0gap) {
        GdEnvelope v;
        if (variant == "wqc_sublinear")
          v = GdEnvelope::WqcSublinear;
        else if (variant == "wqsc_linear")
          v = GdEnvelope::WqscLinear;
        else if (variant == "wq_growth_linear")
          v = GdEnvelope::WqGrowthLinear;
        else if (variant == "graddom_linear")
          v = GdEnvelope::GradDomLinear;
        else
          throw InvalidInput("unknown envelope variant: " + variant);
        return gd_envelope(params, v, k, r0sq, f0gap);
      },
      py::arg("params"), py::arg("variant"), py::arg("k"), py::arg("r0sq"),
      py::arg("f0gap") = 0.0);

  m.def("solve_alpha", &solve_alpha, py::arg("L"), py::arg("gamma"), py::arg("mu"),
        py::arg("gamma_k"), py::arg("scale") = 1.0);
  m.def("lambda_envelope", &lambda_envelope, py::arg("params"), py::arg("gamma0"),
        py::arg("k"));

  m.def(
      "agd_run",
      [](ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0,
         std::optional<double> gamma0, int max_iter, double grad_tol,
         const std::string& variant) {
        return agd_run(oracle, params, x0, gamma0, max_iter, grad_tol,
                       variant_from_string(variant, params.gamma));
      },
      py::arg("oracle"), py::arg("params"), py::arg("x0"), py::arg("gamma0") = std::nullopt,
      py::arg("max_iter") = 500, py::arg("grad_tol") = 0.0, py::arg("variant") = "agd1");

  py::class_<Quadratic>(m, "Quadratic")
      .def(py::init([](double m_, const Vector& c, double kappa) {
             return Quadratic{m_, c, kappa};
           }),
           py::arg("m"), py::arg("c"), py::arg("kappa"))
      .def_readonly("m", &Quadratic::m)
      .def_readonly("c", &Quadratic::c)
      .def_readonly("kappa", &Quadratic::kappa)
      .def("__call__", &Quadratic::operator(), py::arg("x"));

  m.def("grad_step", &grad_step, py::arg("oracle"), py::arg("L"), py::arg("x"));
  m.def("lower_quadratic", &lower_quadratic, py::arg("oracle"), py::arg("gamma"),
        py::arg("mu"), py::arg("x_bar"));
  m.def("optimal_average", &optimal_average, py::arg("A"), py::arg("B"));
  m.def(
      "oqa_run",
      [](ObjectiveOracle& oracle, const ClassParams& params, const Vector& x0, int max_iter,
         double gap_tol) {
        const OqaRun run = oqa_run(oracle, params, x0, max_iter, gap_tol);
        py::dict out;
        out["trajectory"] = run.trajectory;
        out["gaps"] = run.gaps;
        std::vector<double> lower;
        for (const auto& s : run.states) lower.push_back(s.Q.m);
        out["lower_bounds"] = lower;
        return out;
      },
      py::arg("oracle"), py::arg("params"), py::arg("x0"), py::arg("max_iter") = 500,
      py::arg("gap_tol") = 0.0);

  py::class_<LqrProblem>(m, "LqrProblem")
      .def(py::init([](const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                       const Matrix& Sigma0, const Matrix& K0) {
             LqrProblem p{A, B, Q, R, Sigma0, K0};
             p.validate();
             return p;
           }),
           py::arg("A"), py::arg("B"), py::arg("Q"), py::arg("R"), py::arg("Sigma0"),
           py::arg("K0"))
      .def_static("from_file", &LqrProblem::from_file, py::arg("path"))
      .def_readonly("A", &LqrProblem::A)
      .def_readonly("B", &LqrProblem::B)
      .def_readonly("Q", &LqrProblem::Qc)
      .def_readonly("R", &LqrProblem::R)
      .def_readonly("Sigma0", &LqrProblem::Sigma0)
      .def_readonly("K0", &LqrProblem::K0)
      .def("to_json", &LqrProblem::to_json, py::arg("indent") = -1);

  m.def("spectral_radius", &spectral_radius, py::arg("M"));
  m.def("solve_discrete_lyapunov", &solve_discrete_lyapunov, py::arg("M"), py::arg("W"));
  m.def("lqr_cost", &lqr_cost, py::arg("problem"), py::arg("K"));
  m.def("lqr_grad", &lqr_grad, py::arg("problem"), py::arg("K"));
  m.def("riccati_solve", &riccati_solve, py::arg("problem"));
  m.def("lqr_oracle", &lqr_oracle, py::arg("problem"), py::arg("safeguard") = true);
  m.def("flatten_gain", &flatten_gain, py::arg("K"));
  m.def("unflatten_gain", &unflatten_gain, py::arg("coords"), py::arg("m"), py::arg("n"));

  py::class_<LqrWqscResult>(m, "LqrWqscResult")
      .def_readonly("gamma_hat", &LqrWqscResult::gamma_hat)
      .def_readonly("mu_hat", &LqrWqscResult::mu_hat)
      .def_readonly("bound_report", &LqrWqscResult::bound_report)
      .def_readonly("bound_holds_lambda_min", &LqrWqscResult::bound_holds_lambda_min)
      .def_readonly("bound_holds_lambda_max", &LqrWqscResult::bound_holds_lambda_max)
      .def_readonly("best_inner_coefficient", &LqrWqscResult::best_inner_coefficient)
      .def_readonly("wqsc_report", &LqrWqscResult::wqsc_report);
  m.def("check_lqr_wqsc", &check_lqr_wqsc, py::arg("problem"), py::arg("samples"));

  m.def(
      "run_bench_suite",
      [](int max_threads) {
        const BenchOutcome outcome = run_bench_suite(max_threads);
        py::list rows;
        for (const auto& c : outcome.criteria) {
          py::dict row;
          row["id"] = c.id;
          row["name"] = c.name;
          row["passed"] = c.passed;
          row["detail"] = c.detail;
          rows.append(row);
        }
        return rows;
      },
      py::arg("max_threads") = 0);
}
