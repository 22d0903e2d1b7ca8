#include "infoorder/lp.hpp"

#include <limits>

namespace infoorder {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

LpReport lp_feasibility(const LinearEqualitySystem& system, const Tolerances& tol,
                        int max_iterations) {
  const Index m = system.a.rows();
  const Index n = system.a.cols();
  if (system.b.size() != m) throw DimensionError("lp_feasibility: b does not match rows of a");
  if (!system.a.allFinite() || !system.b.allFinite()) {
    throw InvalidInput("lp_feasibility: non-finite constraint data");
  }

  // Columns: n originals, m artificials, then the right-hand side.
  const Index width = n + m + 1;
  RealMatrix tab = RealMatrix::Zero(m + 1, width);
  for (Index i = 0; i < m; ++i) {
    const double sign = system.b(i) < 0 ? -1.0 : 1.0;
    tab.row(i).head(n) = sign * system.a.row(i);
    tab(i, n + i) = 1.0;
    tab(i, width - 1) = sign * system.b(i);
  }
  // Objective row holds reduced costs of "minimize sum of artificials".
  for (Index i = 0; i < m; ++i) tab.row(m) -= tab.row(i);
  for (Index i = 0; i < m; ++i) tab(m, n + i) = 0.0;

  std::vector<Index> basis(m);
  for (Index i = 0; i < m; ++i) basis[i] = n + i;

  LpReport report;
  for (;;) {
    Index entering = -1;
    for (Index j = 0; j < n + m; ++j) {
      if (tab(m, j) < -tol.lp_pivot) {
        entering = j;
        break;
      }
    }
    if (entering < 0) break;
    if (report.iterations >= max_iterations) {
      report.verdict = Verdict::Undecided;
      report.phase_one_value = -tab(m, width - 1);
      return report;
    }

    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) {
      const double coef = tab(i, entering);
      if (coef <= tol.lp_pivot) continue;
      const double ratio = tab(i, width - 1) / coef;
      if (leaving < 0 || ratio < best_ratio - tol.lp_pivot) {
        leaving = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tol.lp_pivot && basis[i] < basis[leaving]) {
        leaving = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    // Phase one is bounded below by zero, so some row always limits the step.
    if (leaving < 0) {
      report.verdict = Verdict::Undecided;
      report.phase_one_value = -tab(m, width - 1);
      return report;
    }

    tab.row(leaving) /= tab(leaving, entering);
    for (Index i = 0; i <= m; ++i) {
      if (i == leaving) continue;
      const double f = tab(i, entering);
      if (f != 0.0) tab.row(i) -= f * tab.row(leaving);
    }
    basis[leaving] = entering;
    ++report.iterations;
  }

  report.phase_one_value = std::max(0.0, -tab(m, width - 1));
  if (report.phase_one_value > tol.lp_feasibility) {
    report.verdict = Verdict::Infeasible;
    return report;
  }
  report.verdict = Verdict::Feasible;
  report.solution = RealVector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    if (basis[i] < n) report.solution(basis[i]) = std::max(0.0, tab(i, width - 1));
  }
  return report;
}

}  // namespace infoorder
