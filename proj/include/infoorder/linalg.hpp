#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "infoorder/tolerances.hpp"

namespace infoorder {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Shapes that do not fit an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that violates a domain invariant (not Hermitian, not a state, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine that did not converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

void require_finite(const ComplexMatrix& m, const char* what);

/// Dense square matrix with exact Hermitian symmetry.
///
/// Construction symmetrizes (A + A^dagger)/2 and rejects inputs whose
/// anti-Hermitian part exceeds `Tolerances::hermitian_reject` in max norm.
/// Linear combinations of Hermitian matrices stay exactly Hermitian, so the
/// arithmetic operators skip the check.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, const Tolerances& tol = {});

  static HermitianMatrix identity(Index n);
  static HermitianMatrix zero(Index n);
  static HermitianMatrix diagonal(const RealVector& d);
  /// |v><v|
  static HermitianMatrix projector(const ComplexVector& v);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

  /// a - t b without intermediate copies; the workhorse of every t-curve.
  static HermitianMatrix combination(const HermitianMatrix& a, double t, const HermitianMatrix& b);

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

Spectrum eig_hermitian(const HermitianMatrix& a);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianMatrix& a);

bool is_psd(const HermitianMatrix& a, double tol);

double max_abs(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Two-factor tensor structure C^{first} (x) C^{second}.
struct TensorDims {
  Index first;
  Index second;
};

enum class Subsystem { First, Second };

/// Traces out the factor that is not `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& a, TensorDims dims, Subsystem keep);

/// Transposes the `which` factor in place of the product basis.
ComplexMatrix partial_transpose(const ComplexMatrix& a, TensorDims dims, Subsystem which);

/// Frobenius-orthonormal real coordinates for n x n Hermitian matrices:
/// diagonal entries first, then sqrt(2) Re h_ij and sqrt(2) Im h_ij for i < j.
Index hermitian_coordinate_count(Index n);
void to_hermitian_coords(const ComplexMatrix& h, Eigen::Ref<RealVector> out);
ComplexMatrix from_hermitian_coords(const Eigen::Ref<const RealVector>& c, Index n);

}  // namespace infoorder
