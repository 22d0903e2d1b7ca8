#pragma once

#include <optional>

#include "infoorder/lp.hpp"

namespace infoorder {

/// A pair of probability vectors {p0, p1} over the same finite outcome set.
class Dichotomy {
 public:
  Dichotomy(RealVector p0, RealVector p1, const Tolerances& tol = {});

  Index outcomes() const { return p0_.size(); }
  const RealVector& p0() const { return p0_; }
  const RealVector& p1() const { return p1_; }

 private:
  RealVector p0_;
  RealVector p1_;
};

/// Column-stochastic matrix; column x' is the distribution P(. | x').
class TransitionMatrix {
 public:
  explicit TransitionMatrix(RealMatrix entries, const Tolerances& tol = {});

  const RealMatrix& entries() const { return t_; }
  Index rows() const { return t_.rows(); }
  Index cols() const { return t_.cols(); }

  /// T applied to both members of a dichotomy over `cols()` outcomes.
  Dichotomy apply(const Dichotomy& d) const;

 private:
  RealMatrix t_;
};

/// sum_x |p0(x) - t p1(x)|
double l1_t_distance(const Dichotomy& d, double t);

/// Whether l1_t_distance(a, t) >= l1_t_distance(b, t) for every t >= 0.
///
/// Both curves are piecewise linear with kinks at the ratios p0/p1, so checking
/// the kinks decides the inequality exactly (up to `ordering_slack`). Kinks
/// above 1 are checked as kinks below 1 of the swapped pairs, which keeps tiny
/// denominators from producing astronomically large t.
bool dichotomy_ordering(const Dichotomy& a, const Dichotomy& b, const Tolerances& tol = {});

struct RandomizationReport {
  Verdict verdict = Verdict::Undecided;
  std::optional<TransitionMatrix> witness;
  double residual = 0;   ///< l1 error of the witness, or the phase-one value when infeasible
  int iterations = 0;
};

/// Searches for a column-stochastic T with T source.p_theta = target.p_theta.
RandomizationReport randomization_feasible(const Dichotomy& source, const Dichotomy& target,
                                           const Tolerances& tol = {});

}  // namespace infoorder
