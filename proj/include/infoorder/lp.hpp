#pragma once

#include "infoorder/linalg.hpp"

namespace infoorder {

enum class Verdict { Feasible, Infeasible, Undecided };

const char* to_string(Verdict v);

/// { x : a x = b, x >= 0 }
struct LinearEqualitySystem {
  RealMatrix a;
  RealVector b;
};

struct LpReport {
  Verdict verdict = Verdict::Undecided;
  RealVector solution;          ///< vertex solution when feasible
  double phase_one_value = 0;   ///< optimal sum of artificials; positive certifies infeasibility
  int iterations = 0;
};

/// Phase-one simplex on a dense tableau with Bland's rule.
LpReport lp_feasibility(const LinearEqualitySystem& system, const Tolerances& tol = {},
                        int max_iterations = 10000);

}  // namespace infoorder
