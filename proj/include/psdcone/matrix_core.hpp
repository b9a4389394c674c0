#pragma once

// Dense complex Hermitian matrices, the normalized trace inner product
// <A, B> = (1/d) Re Tr(AB), and PSD testing.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "psdcone/errors.hpp"

namespace psdcone {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr int kMaxMatrixDim = 4096;

/// Relative tolerances shared by the numeric modules.
struct Tolerances {
  double asymmetry = 1e-8;      // rejection threshold when symmetrizing input
  double eigen = 1e-10;         // eigendecomposition accuracy target
  double sqrt_psd = 1e-8;       // psd_sqrt accepts min eigenvalue >= -sqrt_psd * scale
  double imag_trace = 1e-12;    // allowed Im Tr(AB) relative to |A|_F |B|_F
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// A d x d complex self-adjoint matrix. Construction symmetrizes its input as
/// (M + M*)/2 and zeroes the imaginary part of the diagonal, so the stored
/// entries satisfy the Hermitian identity exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& m, double asymmetry_tol = default_tolerances().asymmetry) {
    if (m.rows() != m.cols()) {
      throw Error(ErrorCode::DimMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected square");
    }
    if (m.rows() < 1) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be positive");
    if (m.rows() > kMaxMatrixDim) {
      throw Error(ErrorCode::DimensionCap, "dimension " + std::to_string(m.rows()) + " exceeds cap " +
                                               std::to_string(kMaxMatrixDim));
    }
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has NaN or Inf entries");
    const double scale = std::max(1.0, m.norm());
    const double asym = (m - m.adjoint()).norm();
    if (asym > asymmetry_tol * scale) {
      throw Error(ErrorCode::NotHermitian, "asymmetry " + std::to_string(asym) + " exceeds tolerance");
    }
    entries_ = 0.5 * (m + m.adjoint());
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) entries_(i, i) = Complex(entries_(i, i).real(), 0.0);
  }

  static HermitianMatrix identity(int d) { return HermitianMatrix(ComplexMatrix::Identity(d, d)); }

  static HermitianMatrix zero(int d) { return HermitianMatrix(ComplexMatrix::Zero(d, d)); }

  static HermitianMatrix diagonal(const RealVector& diag) {
    return HermitianMatrix(diag.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  static HermitianMatrix from_real(const RealMatrix& m) { return HermitianMatrix(m.cast<Complex>()); }

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }
  double frobenius_norm() const { return entries_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const {
    check_same_dim(other);
    return HermitianMatrix(entries_ + other.entries_);
  }
  HermitianMatrix operator-(const HermitianMatrix& other) const {
    check_same_dim(other);
    return HermitianMatrix(entries_ - other.entries_);
  }
  HermitianMatrix operator-() const { return HermitianMatrix(-entries_); }
  HermitianMatrix operator*(double s) const { return HermitianMatrix(s * entries_); }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& m) { return m * s; }

  /// Hermitian square A*A (always Hermitian, unlike a general product).
  HermitianMatrix squared() const { return HermitianMatrix(entries_ * entries_); }

  bool operator==(const HermitianMatrix& other) const {
    return dim() == other.dim() && entries_ == other.entries_;
  }

 private:
  void check_same_dim(const HermitianMatrix& other) const {
    if (dim() != other.dim()) {
      throw Error(ErrorCode::DimMismatch,
                  "dimensions " + std::to_string(dim()) + " and " + std::to_string(other.dim()));
    }
  }

  ComplexMatrix entries_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns
};

inline SpectralDecomposition spectral_decomposition(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SpectralFailure, "eigensolver did not converge (dim " + std::to_string(a.dim()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Real symmetric counterpart used for Gram matrices.
inline RealVector symmetric_eigenvalues(const RealMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SpectralFailure, "symmetric eigensolver failed");
  return solver.eigenvalues();
}

/// (1/d) Re Tr(AB).
inline double trace_inner_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch,
                "trace_inner_product on dims " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  // Tr(AB) = sum_jk A_jk B_kj = sum_jk A_jk conj(B_jk) for Hermitian B.
  const Complex tr = (a.matrix().array() * b.matrix().array().conjugate()).sum();
  return tr.real() / a.dim();
}

/// Unnormalized Tr(AB); complex in general, kept for tests of the discarded
/// imaginary part.
inline Complex raw_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

inline double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 1) return a(0, 0).real();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SpectralFailure, "eigensolver did not converge");
  return solver.eigenvalues()(0);
}

inline bool is_psd(const HermitianMatrix& a, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "is_psd tolerance must be >= 0");
  return min_eigenvalue(a) >= -tol;
}

/// Unique PSD square root. Eigenvalues in [-tol*scale, 0) are clamped to 0.
inline HermitianMatrix psd_sqrt(const HermitianMatrix& a, double tol = default_tolerances().sqrt_psd) {
  const auto eig = spectral_decomposition(a);
  const double scale = std::max(1.0, a.frobenius_norm());
  if (eig.eigenvalues(0) < -tol * scale) {
    throw Error(ErrorCode::NotPsd, "min eigenvalue " + std::to_string(eig.eigenvalues(0)) + " below tolerance");
  }
  const RealVector roots = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& u = eig.eigenvectors;
  return HermitianMatrix(u * roots.cast<Complex>().asDiagonal() * u.adjoint());
}

}  // namespace psdcone
