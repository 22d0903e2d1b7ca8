#include "infoorder/counterexample.hpp"

#include <cmath>
#include <sstream>

namespace infoorder {

CounterexampleParams::CounterexampleParams(double a, double b) : alpha(a), beta(b) {
  if (!(a >= 0 && a <= 1) || !(b >= 0 && b <= 1)) {
    std::ostringstream os;
    os << "counterexample parameters must lie in [0, 1], got alpha=" << a << " beta=" << b;
    throw InvalidInput(os.str());
  }
}

CounterexampleStates build_states(const CounterexampleParams& p) {
  const double a = p.alpha;
  const double b = p.beta;
  const DensityMatrix rho0(HermitianMatrix::diagonal(RealVector{{a, 0.0, 1.0 - a}}));
  const DensityMatrix rho1(HermitianMatrix::diagonal(RealVector{{0.0, a, 1.0 - a}}));
  const DensityMatrix sigma0(HermitianMatrix::diagonal(RealVector{{1.0, 0.0}}));
  const double c = std::sqrt(1.0 - b * b);
  ComplexMatrix s1(2, 2);
  s1 << 1.0 - b * b, c * b,
        c * b, b * b;
  return {QuantumDichotomy(rho0, rho1), QuantumDichotomy(sigma0, DensityMatrix(s1))};
}

double rho_norm_closed(double alpha, double t) {
  return alpha * (1.0 + t) + (1.0 - alpha) * std::abs(1.0 - t);
}

double sigma_norm_closed(double beta, double t) {
  return std::sqrt((1.0 - t) * (1.0 - t) + 4.0 * t * beta * beta);
}

double f_gap(const CounterexampleParams& p, double t) {
  const double r = rho_norm_closed(p.alpha, t);
  const double s = sigma_norm_closed(p.beta, t);
  return r * r - s * s;
}

GapCurve gap_curve(const CounterexampleParams& p, double t_max, int points) {
  if (points < 2 || !(t_max > 0)) throw std::invalid_argument("gap_curve: need points >= 2, t_max > 0");
  GapCurve curve;
  curve.samples.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = t_max * i / (points - 1);
    const double r = rho_norm_closed(p.alpha, t);
    const double s = sigma_norm_closed(p.beta, t);
    curve.samples.push_back({t, r, s, r * r - s * s});
  }
  return curve;
}

BoundCheckReport piecewise_bound_check(const CounterexampleParams& p, std::span<const double> grid,
                                       double slack) {
  BoundCheckReport report;
  const double coef = 4.0 * p.alpha * (1.0 - p.alpha);
  for (double t : grid) {
    if (!(t >= 0)) throw std::domain_error("piecewise_bound_check: grid must be nonnegative");
    const double f = f_gap(p, t);
    if (t <= 1.0) {
      const double bound = coef * (t - t * t);
      if (f - bound < -slack) report.violations.push_back({t, f, bound, "quadratic"});
    }
    if (t >= 1.0) {
      const double bound = coef * (t - 1.0);
      if (f - bound < -slack) report.violations.push_back({t, f, bound, "linear"});
    }
    const double lhs = sigma_norm_closed(p.beta, t);
    const double rhs = sigma_norm_closed(p.alpha, t);
    if (lhs > rhs + slack) report.violations.push_back({t, lhs, rhs, "domination"});
    ++report.points_checked;
  }
  report.passed = report.violations.empty();
  return report;
}

const StageResult* ReproductionReport::first_failure() const {
  for (const auto& s : stages) {
    if (!s.passed) return &s;
  }
  return nullptr;
}

ReproductionReport reproduce(const CounterexampleParams& p, const ReproductionConfig& config) {
  if (!config.allow_out_of_hypothesis) {
    if (!p.in_hypothesis()) {
      throw HypothesisError("reproduce: requires alpha >= beta");
    }
    if (!(p.beta > 0)) {
      throw HypothesisError("reproduce: requires beta > 0 (otherwise sigma0 = sigma1)");
    }
  }
  const Tolerances& tol = config.tol;
  ReproductionReport report;
  report.alpha = p.alpha;
  report.beta = p.beta;
  report.hypothesis_holds = p.in_hypothesis() && p.beta > 0;

  const CounterexampleStates states = build_states(p);
  auto stage = [&](std::string name, bool passed, std::string detail) {
    report.stages.push_back({std::move(name), passed, std::move(detail)});
  };

  stage("rho-pair-commutes", commutes(states.rho, tol.commute), "");

  {
    const CriterionVerdict v = t_criterion(states.rho, states.sigma, config.criterion, tol);
    std::ostringstream os;
    os << to_string(v.outcome);
    if (v.outcome == CriterionOutcome::Fails && v.witness_t) {
      os << " at t=" << *v.witness_t << " (gap " << v.witness_gap << ")";
    }
    if (v.outcome == CriterionOutcome::Undecided) os << ", " << v.uncertified.size() << " intervals";
    stage("trace-norm-criterion", v.outcome == CriterionOutcome::HoldsCertified, os.str());
    report.criterion = v;
  }

  try {
    const CriterionVerdict v = classical_decision_ordering(states.rho, states.sigma,
                                                           config.criterion, tol);
    stage("classical-decision-ordering", v.outcome == CriterionOutcome::HoldsCertified,
          v.outcome == CriterionOutcome::HoldsCertified ? "holds" : to_string(v.outcome));
  } catch (const PreconditionError& e) {
    stage("classical-decision-ordering", false, e.what());
  }

  {
    report.obstruction = support_obstruction(states.rho, states.sigma, tol);
    bool ok = false;
    std::ostringstream os;
    if (report.obstruction) {
      const double overlap = std::abs(report.obstruction->psi(2));
      ok = overlap >= 1.0 - tol.overlap;
      os << "common support vector, overlap with e2 = " << overlap;
    } else {
      os << "no common support vector with distinct targets";
    }
    stage("support-obstruction", ok, os.str());
  }

  const MapFamilyProblem ptp_problem =
      MapFamilyProblem::from_dichotomies(states.rho, states.sigma, MapClass::DecomposablePTP);
  report.ptp = ptp_decomposable_feasible(ptp_problem, config.solver, tol);
  {
    std::ostringstream os;
    os << to_string(report.ptp->verdict) << ", residual " << report.ptp->residual << ", "
       << to_string(report.ptp->exactness);
    stage("no-positive-tp-map",
          report.ptp->verdict == Verdict::Infeasible &&
              report.ptp->exactness == Exactness::ExactForDims,
          os.str());
  }

  const MapFamilyProblem cptp_problem =
      MapFamilyProblem::from_dichotomies(states.rho, states.sigma, MapClass::CPTP);
  report.cptp = cptp_feasible(cptp_problem, config.solver, tol);
  {
    std::ostringstream os;
    os << to_string(report.cptp->verdict) << ", residual " << report.cptp->residual;
    stage("no-cptp-map", report.cptp->verdict == Verdict::Infeasible, os.str());
  }

  report.curve = gap_curve(p, config.t_max, config.resolution);
  {
    std::vector<double> grid;
    for (const auto& s : report.curve.samples) grid.push_back(s.t);
    report.bounds = piecewise_bound_check(p, grid, tol.ordering_slack);
    std::ostringstream os;
    os << report.bounds.violations.size() << " violations on " << report.bounds.points_checked
       << " points";
    stage("piecewise-bounds", report.bounds.passed, os.str());
  }

  {
    double worst = 0;
    for (const auto& s : report.curve.samples) {
      worst = std::max(worst, std::abs(s.rho_norm - quantum_l1_t(states.rho, s.t)));
      worst = std::max(worst, std::abs(s.sigma_norm - quantum_l1_t(states.sigma, s.t)));
    }
    std::ostringstream os;
    os << "max deviation " << worst;
    stage("closed-form-agreement", worst <= tol.closed_form, os.str());
  }

  report.success = report.first_failure() == nullptr;
  return report;
}

}  // namespace infoorder
