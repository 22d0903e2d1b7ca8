#pragma once

namespace infoorder {

/// Every numerical threshold used by the library, in one place.
///
/// Functions take a `Tolerances` by const reference and default to
/// `Tolerances{}`; the CLI can override individual fields from a JSON file.
struct Tolerances {
  // linear algebra
  double hermitian_reject = 1e-9;   ///< max |A - A^dagger| accepted before symmetrizing
  double psd = 1e-10;               ///< min eigenvalue allowed for PSD objects
  double trace = 1e-10;             ///< |tr rho - 1| for density matrices
  double povm_sum = 1e-9;           ///< max |sum M_x - I|
  double commute = 1e-9;            ///< max |[rho0, rho1]| for the commuting hypothesis

  // classical experiments
  double probability_sum = 1e-12;   ///< |sum p - 1|
  double column_sum = 1e-9;         ///< transition matrix column sums
  double ordering_slack = 1e-9;     ///< allowed deficit in t-criteria (equality cases)
  double lp_pivot = 1e-10;
  double lp_feasibility = 1e-9;     ///< phase-one objective below this counts as zero
  double transition_witness = 1e-8; ///< l1 error of T * source vs target

  // map feasibility
  double map_feasibility = 1e-7;    ///< constraint residual accepted for a witness
  double choi_tp = 1e-8;            ///< partial-trace check for TP Choi matrices
  double rank = 1e-9;               ///< eigenvalue threshold defining a support
  double overlap = 1e-8;            ///< top eigenvalue of P0 + P1 must be within this of 2
  double targets_distinct = 1e-9;   ///< trace distance separating sigma0 from sigma1

  // counterexample
  double closed_form = 1e-10;       ///< closed-form norms vs eigenvalue norms
};

}  // namespace infoorder
