#pragma once

#include <optional>
#include <vector>

#include "infoorder/classical.hpp"

namespace infoorder {

/// PSD, unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix m, const Tolerances& tol = {});
  explicit DensityMatrix(const ComplexMatrix& m, const Tolerances& tol = {})
      : DensityMatrix(HermitianMatrix(m, tol), tol) {}

  Index dim() const { return m_.dim(); }
  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  HermitianMatrix m_;
};

/// Finite family of PSD effects summing to the identity.
class POVM {
 public:
  explicit POVM(std::vector<HermitianMatrix> elements, const Tolerances& tol = {});

  Index dim() const { return elements_.front().dim(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<HermitianMatrix>& elements() const { return elements_; }

 private:
  std::vector<HermitianMatrix> elements_;
};

/// {rho0, rho1} on one Hilbert space.
class QuantumDichotomy {
 public:
  QuantumDichotomy(DensityMatrix rho0, DensityMatrix rho1);

  Index dim() const { return rho0_.dim(); }
  const DensityMatrix& rho0() const { return rho0_; }
  const DensityMatrix& rho1() const { return rho1_; }
  QuantumDichotomy swapped() const { return {rho1_, rho0_}; }

 private:
  DensityMatrix rho0_;
  DensityMatrix rho1_;
};

/// q_theta(x) = tr(rho_theta M_x).
Dichotomy induced_model(const QuantumDichotomy& q, const POVM& m, const Tolerances& tol = {});

/// || rho0 - t rho1 ||_1
double quantum_l1_t(const QuantumDichotomy& q, double t);

/// Projectors onto the nonnegative and negative eigenspaces of rho0 - t rho1.
POVM helstrom_measurement(const QuantumDichotomy& q, double t);

bool commutes(const QuantumDichotomy& q, double tol);

/// Values t >= 0 where det(rho0 - t rho1) vanishes on the support of rho0 + rho1,
/// ascending. These are the only places the trace-norm curve can have a kink.
std::vector<double> pencil_roots(const QuantumDichotomy& q, const Tolerances& tol = {});

struct CriterionOptions {
  int t_resolution = 1024;   ///< uniform grid points per unit interval
  int max_depth = 20;        ///< bisection depth per grid interval
};

enum class CriterionOutcome { HoldsCertified, Fails, Undecided };

const char* to_string(CriterionOutcome o);

struct TInterval {
  double lo;
  double hi;
};

struct CriterionVerdict {
  CriterionOutcome outcome = CriterionOutcome::Undecided;
  /// Set on failure: the most negative gap found, on the original t axis.
  std::optional<double> witness_t;
  double witness_gap = 0;          ///< g(witness_t) on the original axis
  std::vector<TInterval> uncertified;
  std::size_t intervals_certified = 0;
};

/// Decides || a0 - t a1 ||_1 >= || b0 - t b1 ||_1 for all t >= 0.
///
/// The half-line is folded onto [0, 1] twice: directly, and through
/// ||x0 - t x1|| = t ||x1 - x0 / t|| for t >= 1. On each grid interval the
/// left curve is bounded below by its supporting line at the midpoint (the
/// Helstrom sign operator gives an exact subgradient) and the right curve
/// above by its chord; the interval is certified if line minus chord is
/// >= -ordering_slack at both ends, and bisected otherwise.
CriterionVerdict t_criterion(const QuantumDichotomy& a, const QuantumDichotomy& b,
                             const CriterionOptions& options = {}, const Tolerances& tol = {});

/// The commuting hypothesis was not met.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// t_criterion read as the classical-decision ordering (every measurement
/// statistic of b is a randomization of a). The equivalence needs a commuting
/// left-hand pair; otherwise throws PreconditionError.
CriterionVerdict classical_decision_ordering(const QuantumDichotomy& a, const QuantumDichotomy& b,
                                             const CriterionOptions& options = {},
                                             const Tolerances& tol = {});

}  // namespace infoorder
