#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "infoorder/quantum.hpp"

namespace infoorder {

/// Choi matrix J = sum_ij E_ij (x) Gamma(E_ij), input factor first.
///
/// The represented map is Gamma(X) = tr_in[(X^T (x) I) J], i.e.
/// Gamma(X)_ab = sum_ij X_ij J(i*dout + a, j*dout + b).
class ChoiMatrix {
 public:
  ChoiMatrix(Index din, Index dout, HermitianMatrix j);

  Index din() const { return din_; }
  Index dout() const { return dout_; }
  const HermitianMatrix& hermitian() const { return j_; }
  const ComplexMatrix& matrix() const { return j_.matrix(); }

  /// Choi matrix of an arbitrary Hermiticity-preserving linear map.
  static ChoiMatrix from_map(Index din, Index dout,
                             const std::function<ComplexMatrix(const ComplexMatrix&)>& map);
  static ChoiMatrix identity_channel(Index d);
  /// X -> tr(X) sigma
  static ChoiMatrix replacer(Index din, const DensityMatrix& sigma);
  static ChoiMatrix transpose_map(Index d);

  bool is_trace_preserving(double tol) const;
  bool is_completely_positive(double tol) const;

 private:
  Index din_;
  Index dout_;
  HermitianMatrix j_;
};

HermitianMatrix apply_choi(const ChoiMatrix& j, const HermitianMatrix& x);

enum class MapClass { CPTP, DecomposablePTP };

const char* to_string(MapClass c);

struct StatePair {
  DensityMatrix rho;
  DensityMatrix sigma;
};

/// Gamma(rho_theta) = sigma_theta for every listed pair.
class MapFamilyProblem {
 public:
  MapFamilyProblem(std::vector<StatePair> pairs, MapClass map_class);

  const std::vector<StatePair>& pairs() const { return pairs_; }
  MapClass map_class() const { return map_class_; }
  Index din() const { return pairs_.front().rho.dim(); }
  Index dout() const { return pairs_.front().sigma.dim(); }

  /// Pairs (a.rho0 -> b.rho0), (a.rho1 -> b.rho1).
  static MapFamilyProblem from_dichotomies(const QuantumDichotomy& source,
                                           const QuantumDichotomy& target, MapClass map_class);

 private:
  std::vector<StatePair> pairs_;
  MapClass map_class_;
};

/// A unit vector in the support of two source states whose targets have
/// supports meeting only in zero. A positive map sends it into both target
/// supports, hence to zero, which no trace-preserving map can do.
struct SupportObstruction {
  ComplexVector psi;
  std::size_t first = 0;   ///< indices into the pair list
  std::size_t second = 1;
  double top_eigenvalue = 0;  ///< of P_first + P_second; equals 2 on a common vector
};

enum class Exactness { ExactForDims, SufficientOnly };

const char* to_string(Exactness e);

struct FeasibilityReport {
  Verdict verdict = Verdict::Undecided;
  double residual = 0;   ///< witness residual when feasible, best residual otherwise
  std::optional<ChoiMatrix> witness;
  /// J = cp_part + partial_transpose_in(copositive_part) for decomposable witnesses.
  std::optional<HermitianMatrix> cp_part;
  std::optional<HermitianMatrix> copositive_part;
  std::optional<SupportObstruction> obstruction;
  int iterations = 0;
  Exactness exactness = Exactness::ExactForDims;
  std::string note;
};

struct MapSolverOptions {
  int max_iterations = 50000;
  int stall_window = 500;         ///< plateau length after which a dual certificate is attempted
  double stall_decrease = 1e-12;  ///< improvement of the best residual that counts as progress
};

/// Whether some Choi matrix J >= 0 with tr_out J = I maps every rho onto its sigma.
/// Infeasible verdicts carry a Farkas-type dual certificate; plateaus without one
/// run on to the iteration cap and end undecided.
FeasibilityReport cptp_feasible(const MapFamilyProblem& p, const MapSolverOptions& options = {},
                                const Tolerances& tol = {});

/// As cptp_feasible over J = A + partial_transpose_in(B), A, B >= 0. Decomposable
/// maps are exactly the positive maps for (din, dout) in {(2,2), (2,3), (3,2)}.
FeasibilityReport ptp_decomposable_feasible(const MapFamilyProblem& p,
                                            const MapSolverOptions& options = {},
                                            const Tolerances& tol = {});

/// Dispatches on p.map_class().
FeasibilityReport map_feasible(const MapFamilyProblem& p, const MapSolverOptions& options = {},
                               const Tolerances& tol = {});

/// Projector onto the span of eigenvectors with eigenvalue > rank_tol.
HermitianMatrix support_projector(const DensityMatrix& rho, double rank_tol);

/// Common-support obstruction for a -> b; requires the supports of b's states
/// to intersect trivially.
std::optional<SupportObstruction> support_obstruction(const QuantumDichotomy& a,
                                                      const QuantumDichotomy& b,
                                                      const Tolerances& tol = {});

/// Pairwise support_obstruction over a whole family.
std::optional<SupportObstruction> support_obstruction(const std::vector<StatePair>& pairs,
                                                      const Tolerances& tol = {});

/// max( ||tr_out J - I||_1, max_theta ||Gamma(rho_theta) - sigma_theta||_1 )
double constraint_residual(const ChoiMatrix& j, const std::vector<StatePair>& pairs);

}  // namespace infoorder
