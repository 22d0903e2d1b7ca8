#include "infoorder/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace infoorder {

DensityMatrix::DensityMatrix(HermitianMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream os;
    os << "density matrix must have unit trace, got " << tr;
    throw InvalidInput(os.str());
  }
  if (!is_psd(m_, tol.psd)) throw InvalidInput("density matrix must be positive semidefinite");
}

POVM::POVM(std::vector<HermitianMatrix> elements, const Tolerances& tol)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidInput("POVM needs at least one element");
  const Index d = elements_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : elements_) {
    if (e.dim() != d) throw DimensionError("POVM elements differ in dimension");
    if (!is_psd(e, tol.psd)) throw InvalidInput("POVM element is not positive semidefinite");
    sum += e.matrix();
  }
  if (max_abs(sum - ComplexMatrix::Identity(d, d)) > tol.povm_sum) {
    throw InvalidInput("POVM elements do not sum to the identity");
  }
}

QuantumDichotomy::QuantumDichotomy(DensityMatrix rho0, DensityMatrix rho1)
    : rho0_(std::move(rho0)), rho1_(std::move(rho1)) {
  if (rho0_.dim() != rho1_.dim()) throw DimensionError("QuantumDichotomy: dimension mismatch");
}

Dichotomy induced_model(const QuantumDichotomy& q, const POVM& m, const Tolerances& tol) {
  if (q.dim() != m.dim()) throw DimensionError("induced_model: POVM and states differ in dimension");
  const auto n = static_cast<Index>(m.size());
  RealVector q0(n), q1(n);
  for (Index x = 0; x < n; ++x) {
    const ComplexMatrix& e = m.elements()[static_cast<std::size_t>(x)].matrix();
    // tr(rho E) for Hermitian rho, E
    q0(x) = std::max(0.0, q.rho0().matrix().cwiseProduct(e.transpose()).sum().real());
    q1(x) = std::max(0.0, q.rho1().matrix().cwiseProduct(e.transpose()).sum().real());
  }
  q0 /= q0.sum();
  q1 /= q1.sum();
  return {std::move(q0), std::move(q1), tol};
}

double quantum_l1_t(const QuantumDichotomy& q, double t) {
  if (!(t >= 0)) throw std::domain_error("quantum_l1_t: t must be nonnegative");
  return trace_norm(HermitianMatrix::combination(q.rho0().hermitian(), t, q.rho1().hermitian()));
}

POVM helstrom_measurement(const QuantumDichotomy& q, double t) {
  if (!(t >= 0)) throw std::domain_error("helstrom_measurement: t must be nonnegative");
  const Spectrum s =
      eig_hermitian(HermitianMatrix::combination(q.rho0().hermitian(), t, q.rho1().hermitian()));
  const Index d = q.dim();
  ComplexMatrix plus = ComplexMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) {
    if (s.eigenvalues(k) >= 0) plus += s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
  }
  ComplexMatrix minus = ComplexMatrix::Identity(d, d) - plus;
  return POVM({HermitianMatrix(plus), HermitianMatrix(minus)});
}

bool commutes(const QuantumDichotomy& q, double tol) {
  const ComplexMatrix& a = q.rho0().matrix();
  const ComplexMatrix& b = q.rho1().matrix();
  return max_abs(a * b - b * a) <= tol;
}

std::vector<double> pencil_roots(const QuantumDichotomy& q, const Tolerances& tol) {
  // rho0 v = t rho1 v  <=>  rho0 v = mu (rho0 + rho1) v  with mu = t / (1 + t),
  // a Hermitian problem on the support of rho0 + rho1.
  const HermitianMatrix total = q.rho0().hermitian() + q.rho1().hermitian();
  const Spectrum s = eig_hermitian(total);
  std::vector<Index> support;
  for (Index k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues(k) > tol.rank) support.push_back(k);
  }
  const auto r = static_cast<Index>(support.size());
  ComplexMatrix whiten(q.dim(), r);
  for (Index k = 0; k < r; ++k) {
    whiten.col(k) = s.eigenvectors.col(support[k]) / std::sqrt(s.eigenvalues(support[k]));
  }
  const ComplexMatrix reduced = whiten.adjoint() * q.rho0().matrix() * whiten;
  const Spectrum mu = eig_hermitian(HermitianMatrix((reduced + reduced.adjoint()) / 2.0));

  std::vector<double> roots;
  constexpr double kEdge = 1e-12;
  for (Index k = 0; k < mu.eigenvalues.size(); ++k) {
    const double m = std::clamp(mu.eigenvalues(k), 0.0, 1.0);
    if (m >= 1.0 - kEdge) continue;  // kink at infinity
    roots.push_back(m <= kEdge ? 0.0 : m / (1.0 - m));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

const char* to_string(CriterionOutcome o) {
  switch (o) {
    case CriterionOutcome::HoldsCertified: return "holds-certified";
    case CriterionOutcome::Fails: return "fails";
    case CriterionOutcome::Undecided: return "undecided";
  }
  return "undecided";
}

namespace {

/// One fold of the half-line onto [0, 1].
class FoldedCheck {
 public:
  FoldedCheck(QuantumDichotomy a, QuantumDichotomy b, bool swapped, const CriterionOptions& opt,
              const Tolerances& tol, CriterionVerdict& verdict, double& worst)
      : a_(std::move(a)), b_(std::move(b)), swapped_(swapped), opt_(opt), tol_(tol),
        verdict_(verdict), worst_(worst) {}

  std::vector<double> grid() const {
    std::vector<double> pts;
    for (int i = 0; i <= opt_.t_resolution; ++i) pts.push_back(double(i) / opt_.t_resolution);
    for (const auto* q : {&a_, &b_}) {
      for (double r : pencil_roots(*q, tol_)) {
        if (r > 0 && r < 1) pts.push_back(r);
      }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> merged;
    for (double p : pts) {
      if (merged.empty() || p - merged.back() > 1e-12) merged.push_back(p);
    }
    return merged;
  }

  /// Evaluates g on the grid; false if some point already fails.
  bool evaluate(const std::vector<double>& pts, std::vector<double>& fb) {
    bool ok = true;
    fb.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      fb[i] = quantum_l1_t(b_, pts[i]);
      ok = record(pts[i], quantum_l1_t(a_, pts[i]) - fb[i]) && ok;
    }
    return ok;
  }

  /// Certifies [lo, hi]; false once a failing point is found.
  bool certify(double lo, double hi, double fb_lo, double fb_hi, int depth) {
    const double mid = 0.5 * (lo + hi);
    const Spectrum s = eig_hermitian(
        HermitianMatrix::combination(a_.rho0().hermitian(), mid, a_.rho1().hermitian()));
    // Supporting line of t -> ||a0 - t a1||_1 at mid: tr P (a0 - t a1) with P = sign(a0 - mid a1).
    const ComplexMatrix& v = s.eigenvectors;
    const RealVector d0 = (v.adjoint() * a_.rho0().matrix() * v).diagonal().real();
    const RealVector d1 = (v.adjoint() * a_.rho1().matrix() * v).diagonal().real();
    double c0 = 0, c1 = 0;
    for (Index k = 0; k < s.eigenvalues.size(); ++k) {
      const double sign = s.eigenvalues(k) >= 0 ? 1.0 : -1.0;
      c0 += sign * d0(k);
      c1 += sign * d1(k);
    }
    const double slack = tol_.ordering_slack;
    if (c0 - lo * c1 - fb_lo >= -slack && c0 - hi * c1 - fb_hi >= -slack) {
      ++verdict_.intervals_certified;
      return true;
    }
    if (depth >= opt_.max_depth) {
      uncertified_.push_back({lo, hi});
      return true;
    }
    const double fb_mid = quantum_l1_t(b_, mid);
    const double fa_mid = s.eigenvalues.cwiseAbs().sum();
    if (!record(mid, fa_mid - fb_mid)) return false;
    return certify(lo, mid, fb_lo, fb_mid, depth + 1) && certify(mid, hi, fb_mid, fb_hi, depth + 1);
  }

  bool run_intervals(const std::vector<double>& pts, const std::vector<double>& fb) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (!certify(pts[i], pts[i + 1], fb[i], fb[i + 1], 0)) return false;
    }
    return true;
  }

  void export_uncertified() {
    for (const auto& iv : uncertified_) {
      if (!swapped_) {
        verdict_.uncertified.push_back(iv);
      } else {
        verdict_.uncertified.push_back({1.0 / iv.hi, iv.lo > 0 ? 1.0 / iv.lo
                                                                : std::numeric_limits<double>::infinity()});
      }
    }
  }

 private:
  /// Tracks the worst point across both folds; false if g < -slack there.
  bool record(double s, double gap) {
    if (!verdict_.witness_t || gap < worst_) {
      worst_ = gap;
      if (swapped_) {
        verdict_.witness_t = s > 0 ? 1.0 / s : std::numeric_limits<double>::infinity();
        verdict_.witness_gap = s > 0 ? gap / s : 0.0;
      } else {
        verdict_.witness_t = s;
        verdict_.witness_gap = gap;
      }
    }
    return gap >= -tol_.ordering_slack;
  }

  QuantumDichotomy a_;
  QuantumDichotomy b_;
  bool swapped_;
  const CriterionOptions& opt_;
  const Tolerances& tol_;
  CriterionVerdict& verdict_;
  double& worst_;  // gap on the folded axis, shared by both folds
  std::vector<TInterval> uncertified_;
};

}  // namespace

CriterionVerdict t_criterion(const QuantumDichotomy& a, const QuantumDichotomy& b,
                             const CriterionOptions& options, const Tolerances& tol) {
  if (options.t_resolution < 1 || options.max_depth < 0) {
    throw std::invalid_argument("t_criterion: resolution must be >= 1 and depth >= 0");
  }
  CriterionVerdict verdict;
  double worst = std::numeric_limits<double>::infinity();
  FoldedCheck direct(a, b, false, options, tol, verdict, worst);
  FoldedCheck folded(a.swapped(), b.swapped(), true, options, tol, verdict, worst);

  const auto direct_grid = direct.grid();
  const auto folded_grid = folded.grid();
  std::vector<double> direct_fb, folded_fb;
  const bool direct_ok = direct.evaluate(direct_grid, direct_fb);
  const bool folded_ok = folded.evaluate(folded_grid, folded_fb);
  if (!direct_ok || !folded_ok) {
    verdict.outcome = CriterionOutcome::Fails;
    return verdict;
  }
  if (!direct.run_intervals(direct_grid, direct_fb) ||
      !folded.run_intervals(folded_grid, folded_fb)) {
    verdict.outcome = CriterionOutcome::Fails;
    return verdict;
  }
  direct.export_uncertified();
  folded.export_uncertified();
  verdict.witness_t.reset();
  verdict.witness_gap = 0;
  verdict.outcome = verdict.uncertified.empty() ? CriterionOutcome::HoldsCertified
                                                : CriterionOutcome::Undecided;
  return verdict;
}

CriterionVerdict classical_decision_ordering(const QuantumDichotomy& a, const QuantumDichotomy& b,
                                             const CriterionOptions& options,
                                             const Tolerances& tol) {
  if (!commutes(a, tol.commute)) {
    throw PreconditionError(
        "classical_decision_ordering: rho0 and rho1 do not commute; the trace-norm criterion "
        "is then only a necessary condition");
  }
  return t_criterion(a, b, options, tol);
}

}  // namespace infoorder
