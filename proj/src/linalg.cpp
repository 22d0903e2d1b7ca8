#include "infoorder/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace infoorder {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": matrix has non-finite entries");
  }
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "Hermitian matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  require_finite(m, "HermitianMatrix");
  const double skew = max_abs(m - m.adjoint()) / 2.0;
  if (skew > tol.hermitian_reject) {
    std::ostringstream os;
    os << "matrix is not Hermitian (anti-Hermitian part " << skew << ")";
    throw InvalidInput(os.str());
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianMatrix HermitianMatrix::identity(Index n) {
  return {ComplexMatrix::Identity(n, n), Trusted{}};
}

HermitianMatrix HermitianMatrix::zero(Index n) {
  return {ComplexMatrix::Zero(n, n), Trusted{}};
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
  m.diagonal() = d.cast<Complex>();
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::projector(const ComplexVector& v) {
  return HermitianMatrix(ComplexMatrix(v * v.adjoint()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("HermitianMatrix +: dimension mismatch");
  return {m_ + o.m_, Trusted{}};
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("HermitianMatrix -: dimension mismatch");
  return {m_ - o.m_, Trusted{}};
}

HermitianMatrix HermitianMatrix::operator*(double s) const { return {m_ * s, Trusted{}}; }

HermitianMatrix HermitianMatrix::combination(const HermitianMatrix& a, double t,
                                             const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("HermitianMatrix combination: dimension mismatch");
  return {a.m_ - t * b.m_, Trusted{}};
}

Spectrum eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw SolverError("Hermitian eigensolver did not converge", max_abs(a.matrix()));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("Hermitian eigensolver did not converge", max_abs(a.matrix()));
  }
  return solver.eigenvalues().cwiseAbs().sum();
}

bool is_psd(const HermitianMatrix& a, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SolverError("Hermitian eigensolver did not converge", max_abs(a.matrix()));
  }
  return solver.eigenvalues()(0) >= -tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

void check_tensor_shape(const ComplexMatrix& a, TensorDims dims, const char* op) {
  const Index n = dims.first * dims.second;
  if (dims.first <= 0 || dims.second <= 0 || a.rows() != n || a.cols() != n) {
    std::ostringstream os;
    os << op << ": expected " << n << "x" << n << " for dims (" << dims.first << ", "
       << dims.second << "), got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& a, TensorDims dims, Subsystem keep) {
  check_tensor_shape(a, dims, "partial_trace");
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  if (keep == Subsystem::First) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        for (Index k = 0; k < d2; ++k) out(i, j) += a(i * d2 + k, j * d2 + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += a.block(i * d2, i * d2, d2, d2);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& a, TensorDims dims, Subsystem which) {
  check_tensor_shape(a, dims, "partial_transpose");
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  ComplexMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < d1; ++i) {
    for (Index j = 0; j < d1; ++j) {
      if (which == Subsystem::First) {
        out.block(i * d2, j * d2, d2, d2) = a.block(j * d2, i * d2, d2, d2);
      } else {
        out.block(i * d2, j * d2, d2, d2) = a.block(i * d2, j * d2, d2, d2).transpose();
      }
    }
  }
  return out;
}

Index hermitian_coordinate_count(Index n) { return n * n; }

void to_hermitian_coords(const ComplexMatrix& h, Eigen::Ref<RealVector> out) {
  const Index n = h.rows();
  Index k = 0;
  for (Index i = 0; i < n; ++i) out(k++) = h(i, i).real();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(k++) = std::numbers::sqrt2 * h(i, j).real();
      out(k++) = std::numbers::sqrt2 * h(i, j).imag();
    }
  }
}

ComplexMatrix from_hermitian_coords(const Eigen::Ref<const RealVector>& c, Index n) {
  ComplexMatrix h(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) h(i, i) = c(k++);
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const Complex v(c(k) * inv_sqrt2, c(k + 1) * inv_sqrt2);
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

}  // namespace infoorder
