#include "infoorder/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoorder {

namespace {

void check_distribution(const RealVector& p, const Tolerances& tol, const char* name) {
  if (!p.allFinite()) throw InvalidInput(std::string(name) + ": non-finite probability");
  if (p.size() > 0 && p.minCoeff() < 0) {
    throw InvalidInput(std::string(name) + ": negative probability");
  }
  const double s = p.sum();
  if (std::abs(s - 1.0) > tol.probability_sum) {
    std::ostringstream os;
    os << name << ": probabilities sum to " << s;
    throw InvalidInput(os.str());
  }
}

}  // namespace

Dichotomy::Dichotomy(RealVector p0, RealVector p1, const Tolerances& tol)
    : p0_(std::move(p0)), p1_(std::move(p1)) {
  if (p0_.size() == 0 || p0_.size() != p1_.size()) {
    throw DimensionError("Dichotomy: p0 and p1 must be non-empty and of equal length");
  }
  check_distribution(p0_, tol, "Dichotomy p0");
  check_distribution(p1_, tol, "Dichotomy p1");
}

TransitionMatrix::TransitionMatrix(RealMatrix entries, const Tolerances& tol)
    : t_(std::move(entries)) {
  if (t_.size() == 0) throw DimensionError("TransitionMatrix: empty");
  if (!t_.allFinite() || t_.minCoeff() < 0 || t_.maxCoeff() > 1) {
    throw InvalidInput("TransitionMatrix: entries must lie in [0, 1]");
  }
  for (Index j = 0; j < t_.cols(); ++j) {
    if (std::abs(t_.col(j).sum() - 1.0) > tol.column_sum) {
      throw InvalidInput("TransitionMatrix: columns must sum to 1");
    }
  }
}

Dichotomy TransitionMatrix::apply(const Dichotomy& d) const {
  if (d.outcomes() != cols()) throw DimensionError("TransitionMatrix::apply: outcome mismatch");
  RealVector q0 = t_ * d.p0();
  RealVector q1 = t_ * d.p1();
  // Column sums are 1 only to column_sum; renormalize to keep the result a distribution.
  q0 /= q0.sum();
  q1 /= q1.sum();
  return {std::move(q0), std::move(q1)};
}

double l1_t_distance(const Dichotomy& d, double t) {
  if (!(t >= 0)) throw std::domain_error("l1_t_distance: t must be nonnegative");
  return (d.p0() - t * d.p1()).cwiseAbs().sum();
}

namespace {

// l1 curves compared on t in [0, 1] at 0, 1 and every kink inside.
bool ordered_on_unit_interval(const Dichotomy& a, const Dichotomy& b, double slack) {
  std::vector<double> kinks{0.0, 1.0};
  for (const Dichotomy* d : {&a, &b}) {
    for (Index x = 0; x < d->outcomes(); ++x) {
      const double p0 = d->p0()(x), p1 = d->p1()(x);
      if (p1 > 0 && p0 < p1) kinks.push_back(p0 / p1);
    }
  }
  return std::all_of(kinks.begin(), kinks.end(), [&](double t) {
    return l1_t_distance(a, t) >= l1_t_distance(b, t) - slack;
  });
}

}  // namespace

bool dichotomy_ordering(const Dichotomy& a, const Dichotomy& b, const Tolerances& tol) {
  // For t > 1, ||p0 - t p1|| = t ||p1 - p0 / t||, so the swapped pairs on
  // [0, 1] cover the rest of the half-line without evaluating at huge t.
  return ordered_on_unit_interval(a, b, tol.ordering_slack) &&
         ordered_on_unit_interval(Dichotomy(a.p1(), a.p0(), tol), Dichotomy(b.p1(), b.p0(), tol),
                                  tol.ordering_slack);
}

RandomizationReport randomization_feasible(const Dichotomy& source, const Dichotomy& target,
                                           const Tolerances& tol) {
  const Index n = source.outcomes();
  const Index m = target.outcomes();
  // Variable T(x, x') sits at x * n + x'.
  LinearEqualitySystem lp{RealMatrix::Zero(n + 2 * m, m * n), RealVector::Zero(n + 2 * m)};
  for (Index xs = 0; xs < n; ++xs) {
    for (Index x = 0; x < m; ++x) lp.a(xs, x * n + xs) = 1.0;
    lp.b(xs) = 1.0;
  }
  for (Index x = 0; x < m; ++x) {
    for (Index xs = 0; xs < n; ++xs) {
      lp.a(n + x, x * n + xs) = source.p0()(xs);
      lp.a(n + m + x, x * n + xs) = source.p1()(xs);
    }
    lp.b(n + x) = target.p0()(x);
    lp.b(n + m + x) = target.p1()(x);
  }

  const LpReport lp_report = lp_feasibility(lp, tol);
  RandomizationReport report;
  report.verdict = lp_report.verdict;
  report.iterations = lp_report.iterations;
  report.residual = lp_report.phase_one_value;
  if (lp_report.verdict != Verdict::Feasible) return report;

  RealMatrix t(m, n);
  for (Index x = 0; x < m; ++x)
    for (Index xs = 0; xs < n; ++xs) t(x, xs) = std::clamp(lp_report.solution(x * n + xs), 0.0, 1.0);
  TransitionMatrix witness(std::move(t), tol);
  report.residual = (witness.entries() * source.p0() - target.p0()).cwiseAbs().sum() +
                    (witness.entries() * source.p1() - target.p1()).cwiseAbs().sum();
  if (report.residual > tol.transition_witness) {
    report.verdict = Verdict::Undecided;
    return report;
  }
  report.witness = std::move(witness);
  return report;
}

}  // namespace infoorder
