#include "infoorder/map_feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace infoorder {

ChoiMatrix::ChoiMatrix(Index din, Index dout, HermitianMatrix j)
    : din_(din), dout_(dout), j_(std::move(j)) {
  if (din <= 0 || dout <= 0 || j_.dim() != din * dout) {
    std::ostringstream os;
    os << "ChoiMatrix: expected dimension " << din * dout << ", got " << j_.dim();
    throw DimensionError(os.str());
  }
}

ChoiMatrix ChoiMatrix::from_map(Index din, Index dout,
                                const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
  for (Index i = 0; i < din; ++i) {
    for (Index k = 0; k < din; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(din, din);
      e(i, k) = 1.0;
      const ComplexMatrix image = map(e);
      if (image.rows() != dout || image.cols() != dout) {
        throw DimensionError("ChoiMatrix::from_map: map output has the wrong shape");
      }
      j.block(i * dout, k * dout, dout, dout) = image;
    }
  }
  return {din, dout, HermitianMatrix(j)};
}

ChoiMatrix ChoiMatrix::identity_channel(Index d) {
  return from_map(d, d, [](const ComplexMatrix& x) { return x; });
}

ChoiMatrix ChoiMatrix::replacer(Index din, const DensityMatrix& sigma) {
  const ComplexMatrix s = sigma.matrix();
  return from_map(din, sigma.dim(), [s](const ComplexMatrix& x) { return ComplexMatrix(x.trace() * s); });
}

ChoiMatrix ChoiMatrix::transpose_map(Index d) {
  return from_map(d, d, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
}

bool ChoiMatrix::is_trace_preserving(double tol) const {
  const ComplexMatrix marginal = partial_trace(matrix(), {din_, dout_}, Subsystem::First);
  return max_abs(marginal - ComplexMatrix::Identity(din_, din_)) <= tol;
}

bool ChoiMatrix::is_completely_positive(double tol) const { return is_psd(j_, tol); }

namespace {

ComplexMatrix apply_choi_raw(const ComplexMatrix& j, Index din, Index dout, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (Index i = 0; i < din; ++i)
    for (Index k = 0; k < din; ++k)
      if (x(i, k) != Complex(0)) out += x(i, k) * j.block(i * dout, k * dout, dout, dout);
  return out;
}

}  // namespace

HermitianMatrix apply_choi(const ChoiMatrix& j, const HermitianMatrix& x) {
  if (x.dim() != j.din()) throw DimensionError("apply_choi: input dimension mismatch");
  return HermitianMatrix(apply_choi_raw(j.matrix(), j.din(), j.dout(), x.matrix()));
}

const char* to_string(MapClass c) {
  return c == MapClass::CPTP ? "cptp" : "ptp";
}

const char* to_string(Exactness e) {
  return e == Exactness::ExactForDims ? "exact-for-dims" : "sufficient-only";
}

MapFamilyProblem::MapFamilyProblem(std::vector<StatePair> pairs, MapClass map_class)
    : pairs_(std::move(pairs)), map_class_(map_class) {
  if (pairs_.empty()) throw InvalidInput("MapFamilyProblem: empty pair list");
  for (const auto& p : pairs_) {
    if (p.rho.dim() != din() || p.sigma.dim() != dout()) {
      throw DimensionError("MapFamilyProblem: inconsistent state dimensions");
    }
  }
}

MapFamilyProblem MapFamilyProblem::from_dichotomies(const QuantumDichotomy& source,
                                                    const QuantumDichotomy& target,
                                                    MapClass map_class) {
  return MapFamilyProblem({{source.rho0(), target.rho0()}, {source.rho1(), target.rho1()}},
                          map_class);
}

double constraint_residual(const ChoiMatrix& j, const std::vector<StatePair>& pairs) {
  const ComplexMatrix marginal = partial_trace(j.matrix(), {j.din(), j.dout()}, Subsystem::First);
  double r = trace_norm(HermitianMatrix(marginal) - HermitianMatrix::identity(j.din()));
  for (const auto& p : pairs) {
    r = std::max(r, trace_norm(apply_choi(j, p.rho.hermitian()) - p.sigma.hermitian()));
  }
  return r;
}

namespace {

/// Dykstra projections between a product of PSD cones and the affine set
/// { z : M z = b } in Frobenius-orthonormal Hermitian coordinates.
class ChoiProjectionSolver {
 public:
  ChoiProjectionSolver(const MapFamilyProblem& p, bool decomposable, const MapSolverOptions& opt,
                       const Tolerances& tol)
      : p_(p), decomposable_(decomposable), opt_(opt), tol_(tol), din_(p.din()), dout_(p.dout()),
        n_(din_ * dout_), block_(hermitian_coordinate_count(n_)) {
    build_constraints();
  }

  FeasibilityReport solve() {
    FeasibilityReport report;
    const Index vars = decomposable_ ? 2 * block_ : block_;
    RealVector offset = pinv_ * target_;
    const double linear_gap = (constraints_ * offset - target_).norm();
    if (linear_gap > 10 * tol_.map_feasibility) {
      report.verdict = Verdict::Infeasible;
      report.residual = linear_gap;
      report.note = "linear constraints are inconsistent (no linear map fits)";
      return report;
    }
    const RealMatrix nullspace_projector = RealMatrix::Identity(vars, vars) - pinv_ * constraints_;

    for (const ChoiMatrix& c : candidates()) {
      RealVector z = RealVector::Zero(vars);
      to_hermitian_coords(c.matrix(), z.head(block_));
      if (accept(z, report)) {
        report.note = "closed-form candidate";
        return report;
      }
    }

    RealVector x = offset;
    RealVector correction = RealVector::Zero(vars);
    RealVector y(vars);
    double best = std::numeric_limits<double>::infinity();
    int stalled = 0;
    int next_polish = kFirstPolish;
    for (int it = 1; it <= opt_.max_iterations; ++it) {
      const RealVector shifted = x + correction;
      project_cone(shifted, y);
      correction = shifted - y;
      const double r = (constraints_ * y - target_).norm();
      report.iterations = it;

      if (r <= tol_.map_feasibility && accept(y, report)) return report;
      if (it == next_polish) {
        next_polish *= 2;
        if (r <= kPolishBelow) {
          if (auto z = polish(y); z && accept(*z, report)) return report;
        }
      }

      if (it % kCertifyEvery == 0 && r > 10 * tol_.map_feasibility && farkas_certifies(y)) {
        report.verdict = Verdict::Infeasible;
        report.residual = std::min(best, r);
        report.note = "dual certificate from the projection gap";
        return report;
      }

      if (best - r > opt_.stall_decrease) {
        stalled = 0;
      } else {
        ++stalled;
      }
      best = std::min(best, r);
      if (stalled >= opt_.stall_window && best > 10 * tol_.map_feasibility) {
        // a plateau alone also occurs on feasible sets without interior points
        if (farkas_certifies(y)) {
          report.verdict = Verdict::Infeasible;
          report.residual = best;
          report.note = "residual stalled above tolerance; dual certificate confirms";
          return report;
        }
        stalled = 0;
      }

      // The affine set needs no Dykstra correction: its increments are normal to it.
      x = nullspace_projector * y + offset;
    }
    report.verdict = Verdict::Undecided;
    report.residual = best;
    report.note = "iteration cap reached";
    return report;
  }

 private:
  static constexpr int kFirstPolish = 16;
  static constexpr int kCertifyEvery = 25;
  static constexpr double kPolishBelow = 0.25;
  static constexpr int kPolishSteps = 40;
  static constexpr double kPolishTarget = 1e-12;

  // lambda = (M M^T)^+ r gives w = M^T lambda. Every feasible z has cone blocks of total
  // trace din, so w >= -delta on the cone and lambda.b + delta din < 0 rules z out.
  bool farkas_certifies(const RealVector& y) const {
    const RealVector r = constraints_ * y - target_;
    const RealVector lambda = pinv_.transpose() * (pinv_ * r);
    const RealVector w = constraints_.transpose() * lambda;
    double delta = 0;
    for (Index b = 0; b < w.size() / block_; ++b) {
      const Spectrum sp = eig_hermitian(HermitianMatrix(from_hermitian_coords(w.segment(b * block_, block_), n_)));
      delta = std::max(delta, -sp.eigenvalues(0));
    }
    const double margin = 1e-9 * lambda.norm() * target_.norm();
    return lambda.dot(target_) + delta * static_cast<double>(din_) < -margin;
  }

  // Identity channel when every pair is fixed, replacer when every target agrees.
  std::vector<ChoiMatrix> candidates() const {
    std::vector<ChoiMatrix> out;
    const auto& pairs = p_.pairs();
    auto all = [&](auto pred) { return std::all_of(pairs.begin(), pairs.end(), pred); };
    if (din_ == dout_ && all([](const StatePair& q) { return max_abs(q.rho.matrix() - q.sigma.matrix()) == 0.0; })) {
      out.push_back(ChoiMatrix::identity_channel(din_));
    }
    const ComplexMatrix& first = pairs.front().sigma.matrix();
    if (all([&](const StatePair& q) { return max_abs(q.sigma.matrix() - first) == 0.0; })) {
      out.push_back(ChoiMatrix::replacer(din_, pairs.front().sigma));
    }
    return out;
  }

  // Fills a feasible report from cone point z if it meets every witness check.
  bool accept(const RealVector& z, FeasibilityReport& report) const {
    ChoiMatrix j = to_choi(z);
    const double residual = constraint_residual(j, p_.pairs());
    if (residual > tol_.map_feasibility || !j.is_trace_preserving(tol_.choi_tp)) return false;
    report.verdict = Verdict::Feasible;
    report.residual = residual;
    report.witness = std::move(j);
    if (decomposable_) {
      report.cp_part = HermitianMatrix(from_hermitian_coords(z.head(block_), n_));
      report.copositive_part = HermitianMatrix(from_hermitian_coords(z.tail(block_), n_));
    }
    return true;
  }

  // Levenberg-Marquardt on the factored form: every cone block is L L^H, so
  // PSD holds by construction and the affine residual is driven to zero
  // quickly even when all solutions are rank deficient. Starts from the
  // eigendecomposition of y.
  std::optional<RealVector> polish(const RealVector& y) const {
    const Index blocks = decomposable_ ? 2 : 1;
    const Index per_block = 2 * n_ * n_;
    std::vector<ComplexMatrix> factors;
    for (Index b = 0; b < blocks; ++b) {
      const Spectrum sp = eig_hermitian(HermitianMatrix(from_hermitian_coords(y.segment(b * block_, block_), n_)));
      // a small floor keeps zero columns from being stationary
      const double floor = 1e-6 * std::max(1.0, sp.eigenvalues.maxCoeff());
      const RealVector root = sp.eigenvalues.cwiseMax(floor).cwiseSqrt();
      factors.push_back(sp.eigenvectors * root.cast<Complex>().asDiagonal());
    }

    auto cone_point = [&](const std::vector<ComplexMatrix>& f) {
      RealVector z(y.size());
      for (Index b = 0; b < blocks; ++b) {
        const ComplexMatrix& l = f[static_cast<std::size_t>(b)];
        to_hermitian_coords(l * l.adjoint(), z.segment(b * block_, block_));
      }
      return z;
    };
    auto residual_of = [&](const RealVector& z) { return RealVector(constraints_ * z - target_); };

    RealVector z = cone_point(factors);
    RealVector f = residual_of(z);
    double mu = 1e-3;
    RealMatrix jac(constraints_.rows(), blocks * per_block);
    RealVector dz(block_);
    for (int it = 0; it < kPolishSteps && f.norm() > kPolishTarget; ++it) {
      for (Index b = 0; b < blocks; ++b) {
        const ComplexMatrix& l = factors[static_cast<std::size_t>(b)];
        for (Index j = 0; j < n_; ++j)
          for (Index i = 0; i < n_; ++i)
            for (int part = 0; part < 2; ++part) {
              // d(L L^H) along L(i, j) += h: h e_i (row j of L^H) + its adjoint
              const Complex h = part == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
              ComplexMatrix d = ComplexMatrix::Zero(n_, n_);
              d.row(i) = h * l.col(j).adjoint();
              d += d.adjoint().eval();
              to_hermitian_coords(d, dz);
              jac.col(b * per_block + 2 * (j * n_ + i) + part) =
                  constraints_.middleCols(b * block_, block_) * dz;
            }
      }
      const RealMatrix normal = jac.transpose() * jac;
      const RealVector grad = jac.transpose() * f;
      bool improved = false;
      for (int attempt = 0; attempt < 8 && !improved; ++attempt) {
        RealMatrix damped = normal;
        damped.diagonal().array() += mu;
        const RealVector step = damped.ldlt().solve(-grad);
        std::vector<ComplexMatrix> trial = factors;
        for (Index b = 0; b < blocks; ++b) {
          ComplexMatrix& l = trial[static_cast<std::size_t>(b)];
          for (Index j = 0; j < n_; ++j)
            for (Index i = 0; i < n_; ++i) {
              const Index k = b * per_block + 2 * (j * n_ + i);
              l(i, j) += Complex(step(k), step(k + 1));
            }
        }
        const RealVector trial_z = cone_point(trial);
        const RealVector trial_f = residual_of(trial_z);
        if (trial_f.norm() < f.norm()) {
          factors = std::move(trial);
          z = trial_z;
          f = trial_f;
          mu = std::max(mu / 3.0, 1e-15);
          improved = true;
        } else {
          mu *= 4.0;
        }
      }
      if (!improved) break;
    }
    if (f.norm() > kPolishTarget) return std::nullopt;
    return z;
  }

  ComplexMatrix variable_to_choi(const Eigen::Ref<const RealVector>& z, bool copositive) const {
    const ComplexMatrix h = from_hermitian_coords(z, n_);
    return copositive ? partial_transpose(h, {din_, dout_}, Subsystem::First) : h;
  }

  ChoiMatrix to_choi(const RealVector& z) const {
    ComplexMatrix j = variable_to_choi(z.head(block_), false);
    if (decomposable_) j += variable_to_choi(z.tail(block_), true);
    return {din_, dout_, HermitianMatrix(j)};
  }

  void build_constraints() {
    const Index rows = hermitian_coordinate_count(din_) +
                       static_cast<Index>(p_.pairs().size()) * hermitian_coordinate_count(dout_);
    const Index vars = decomposable_ ? 2 * block_ : block_;
    constraints_ = RealMatrix::Zero(rows, vars);
    target_ = RealVector::Zero(rows);

    auto constraint_image = [&](const ComplexMatrix& j, Eigen::Ref<RealVector> out) {
      Index row = 0;
      const Index din2 = hermitian_coordinate_count(din_);
      const Index dout2 = hermitian_coordinate_count(dout_);
      to_hermitian_coords(partial_trace(j, {din_, dout_}, Subsystem::First), out.segment(row, din2));
      row += din2;
      for (const auto& pair : p_.pairs()) {
        to_hermitian_coords(apply_choi_raw(j, din_, dout_, pair.rho.matrix()),
                            out.segment(row, dout2));
        row += dout2;
      }
    };

    RealVector unit = RealVector::Zero(block_);
    for (Index k = 0; k < vars; ++k) {
      unit.setZero();
      unit(k % block_) = 1.0;
      constraint_image(variable_to_choi(unit, k >= block_), constraints_.col(k));
    }

    Index row = 0;
    to_hermitian_coords(ComplexMatrix::Identity(din_, din_),
                        target_.segment(row, hermitian_coordinate_count(din_)));
    row += hermitian_coordinate_count(din_);
    for (const auto& pair : p_.pairs()) {
      to_hermitian_coords(pair.sigma.matrix(),
                          target_.segment(row, hermitian_coordinate_count(dout_)));
      row += hermitian_coordinate_count(dout_);
    }

    Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(constraints_);
    cod.setThreshold(1e-10);
    pinv_ = cod.pseudoInverse();
  }

  void project_psd(const Eigen::Ref<const RealVector>& z, Eigen::Ref<RealVector> out) const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(from_hermitian_coords(z, n_));
    if (eig.info() != Eigen::Success) throw SolverError("PSD projection: eigensolver failed", z.norm());
    const RealVector clipped = eig.eigenvalues().cwiseMax(0.0);
    const ComplexMatrix& v = eig.eigenvectors();
    to_hermitian_coords(v * clipped.cast<Complex>().asDiagonal() * v.adjoint(), out);
  }

  void project_cone(const RealVector& z, RealVector& out) const {
    project_psd(z.head(block_), out.head(block_));
    if (decomposable_) project_psd(z.tail(block_), out.tail(block_));
  }

  const MapFamilyProblem& p_;
  bool decomposable_;
  const MapSolverOptions& opt_;
  const Tolerances& tol_;
  Index din_;
  Index dout_;
  Index n_;
  Index block_;
  RealMatrix constraints_;
  RealVector target_;
  RealMatrix pinv_;
};

bool decomposability_is_exhaustive(Index din, Index dout) {
  return (din == 2 && dout == 2) || (din == 2 && dout == 3) || (din == 3 && dout == 2);
}

}  // namespace

FeasibilityReport cptp_feasible(const MapFamilyProblem& p, const MapSolverOptions& options,
                                const Tolerances& tol) {
  FeasibilityReport report = ChoiProjectionSolver(p, false, options, tol).solve();
  report.exactness = Exactness::ExactForDims;
  report.obstruction = support_obstruction(p.pairs(), tol);
  return report;
}

FeasibilityReport ptp_decomposable_feasible(const MapFamilyProblem& p,
                                            const MapSolverOptions& options,
                                            const Tolerances& tol) {
  FeasibilityReport report = ChoiProjectionSolver(p, true, options, tol).solve();
  report.exactness = decomposability_is_exhaustive(p.din(), p.dout()) ? Exactness::ExactForDims
                                                                       : Exactness::SufficientOnly;
  report.obstruction = support_obstruction(p.pairs(), tol);
  return report;
}

FeasibilityReport map_feasible(const MapFamilyProblem& p, const MapSolverOptions& options,
                               const Tolerances& tol) {
  return p.map_class() == MapClass::CPTP ? cptp_feasible(p, options, tol)
                                         : ptp_decomposable_feasible(p, options, tol);
}

HermitianMatrix support_projector(const DensityMatrix& rho, double rank_tol) {
  const Spectrum s = eig_hermitian(rho.hermitian());
  ComplexMatrix proj = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (Index k = 0; k < s.eigenvalues.size(); ++k) {
    if (s.eigenvalues(k) > rank_tol) proj += s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
  }
  return HermitianMatrix(proj);
}

namespace {

std::optional<SupportObstruction> common_support(const DensityMatrix& r0, const DensityMatrix& r1,
                                                 const DensityMatrix& s0, const DensityMatrix& s1,
                                                 const Tolerances& tol) {
  if (r0.dim() != r1.dim() || s0.dim() != s1.dim()) {
    throw DimensionError("support_obstruction: dimension mismatch");
  }
  if (0.5 * trace_norm(s0.hermitian() - s1.hermitian()) <= tol.targets_distinct) return std::nullopt;
  const Spectrum s = eig_hermitian(support_projector(r0, tol.rank) + support_projector(r1, tol.rank));
  const Index top = s.eigenvalues.size() - 1;
  if (s.eigenvalues(top) < 2.0 - tol.overlap) return std::nullopt;
  // psi must be sent into both target supports, so those may not overlap.
  const Spectrum t = eig_hermitian(support_projector(s0, tol.rank) + support_projector(s1, tol.rank));
  if (t.eigenvalues(t.eigenvalues.size() - 1) >= 2.0 - tol.overlap) return std::nullopt;

  ComplexVector psi = s.eigenvectors.col(top);
  Index lead = 0;
  psi.cwiseAbs().maxCoeff(&lead);
  psi *= std::conj(psi(lead)) / std::abs(psi(lead));
  SupportObstruction ob;
  ob.psi = psi.normalized();
  ob.top_eigenvalue = s.eigenvalues(top);
  return ob;
}

}  // namespace

std::optional<SupportObstruction> support_obstruction(const QuantumDichotomy& a,
                                                      const QuantumDichotomy& b,
                                                      const Tolerances& tol) {
  return common_support(a.rho0(), a.rho1(), b.rho0(), b.rho1(), tol);
}

std::optional<SupportObstruction> support_obstruction(const std::vector<StatePair>& pairs,
                                                      const Tolerances& tol) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t k = i + 1; k < pairs.size(); ++k) {
      auto ob = common_support(pairs[i].rho, pairs[k].rho, pairs[i].sigma, pairs[k].sigma, tol);
      if (ob) {
        ob->first = i;
        ob->second = k;
        return ob;
      }
    }
  }
  return std::nullopt;
}

}  // namespace infoorder
