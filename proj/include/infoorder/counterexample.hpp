#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoorder/map_feasibility.hpp"

namespace infoorder {

/// Parameters of the qutrit/qubit family. alpha, beta in [0, 1]; the
/// interesting regime is alpha >= beta (checked by `in_hypothesis`, not
/// enforced, so the other side can be explored).
struct CounterexampleParams {
  double alpha;
  double beta;

  CounterexampleParams(double alpha, double beta);
  bool in_hypothesis() const { return alpha >= beta; }
};

struct CounterexampleStates {
  QuantumDichotomy rho;    ///< diag(a, 0, 1-a), diag(0, a, 1-a)
  QuantumDichotomy sigma;  ///< |0><0| and the pure state (sqrt(1-b^2), b)
};

CounterexampleStates build_states(const CounterexampleParams& p);

/// alpha (1 + t) + (1 - alpha) |1 - t|
double rho_norm_closed(double alpha, double t);

/// sqrt((1 - t)^2 + 4 t beta^2)
double sigma_norm_closed(double beta, double t);

/// rho_norm_closed^2 - sigma_norm_closed^2
double f_gap(const CounterexampleParams& p, double t);

struct GapSample {
  double t;
  double rho_norm;
  double sigma_norm;
  double f;
};

struct GapCurve {
  std::vector<GapSample> samples;
};

/// `points` evenly spaced samples on [0, t_max] from the closed forms.
GapCurve gap_curve(const CounterexampleParams& p, double t_max, int points);

struct BoundViolation {
  double t;
  double f;
  double bound;
  std::string which;   ///< "quadratic", "linear" or "domination"
};

struct BoundCheckReport {
  bool passed = true;
  std::size_t points_checked = 0;
  std::vector<BoundViolation> violations;
};

/// Checks on every grid point:
///   f(t) >= 4 a (1 - a)(t - t^2)  for t in [0, 1],
///   f(t) >= 4 a (1 - a)(t - 1)    for t >= 1,
///   sqrt((1-t)^2 + 4 t b^2) <= sqrt((1-t)^2 + 4 t a^2),
/// each to within `slack`.
BoundCheckReport piecewise_bound_check(const CounterexampleParams& p, std::span<const double> grid,
                                       double slack = 1e-9);

struct ReproductionConfig {
  Tolerances tol{};
  CriterionOptions criterion{};
  MapSolverOptions solver{};
  double t_max = 10.0;
  int resolution = 1001;   ///< gap-curve and bound-check grid points on [0, t_max]
  bool allow_out_of_hypothesis = false;
};

struct StageResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproductionReport {
  double alpha = 0;
  double beta = 0;
  bool hypothesis_holds = false;
  std::vector<StageResult> stages;
  std::optional<CriterionVerdict> criterion;
  std::optional<SupportObstruction> obstruction;
  std::optional<FeasibilityReport> ptp;
  std::optional<FeasibilityReport> cptp;
  BoundCheckReport bounds;
  GapCurve curve;
  bool success = false;

  /// First failing stage, if any.
  const StageResult* first_failure() const;
};

/// Thrown when the parameters are outside the requested regime.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs the full check: the rho pair commutes, the trace-norm criterion is
/// certified (hence the classical-decision ordering holds), the common
/// support vector blocks every positive TP map, both map-feasibility solvers
/// report infeasible, the piecewise bounds hold and the closed forms match
/// the eigenvalue norms. Requires beta > 0 and, unless overridden,
/// alpha >= beta.
ReproductionReport reproduce(const CounterexampleParams& p, const ReproductionConfig& config = {});

}  // namespace infoorder
