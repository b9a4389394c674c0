#pragma once

// Isometric linear embedding of R^n into Hermitian 2^{floor(n/2)} matrices
// that sends the spherical cone {x_1 >= 0, x_1^2 >= x_2^2 + ... + x_n^2}
// into the PSD cone.
//
// For odd n = 2k + 1 the vector is split contiguously as x = c | v | w with
// v = x[1..k], w = x[k+1..2k], and mapped to
//
//   c I + (e_v + e*_v) + i (e_w - e*_w)
//
// on the exterior algebra of R^k. The non-scalar part squares to
// (|v|^2 + |w|^2) I, so the eigenvalues are c +- sqrt(|v|^2 + |w|^2).
// Even n is padded with a trailing zero coordinate.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psdcone/exterior_algebra.hpp"
#include "psdcone/matrix_core.hpp"
#include "psdcone/realization.hpp"

namespace psdcone {

inline constexpr int kMaxEmbedInput = 24;
inline constexpr double kConeTolerance = 1e-10;

inline int embedding_dimension(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (n > kMaxEmbedInput) {
    throw Error(ErrorCode::DimensionCap, "n = " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxEmbedInput));
  }
  return 1 << (n / 2);
}

/// The c | v | w split of an input vector after odd padding.
struct ConeVector {
  int n = 0;  // original dimension
  double c = 0.0;
  std::vector<double> v;
  std::vector<double> w;

  double tail_norm() const {
    double s = 0.0;
    for (double x : v) s += x * x;
    for (double x : w) s += x * x;
    return std::sqrt(s);
  }

  /// c >= 0 and c^2 >= |v|^2 + |w|^2, relative to |x|^2.
  bool in_cone(double tol = kConeTolerance) const {
    const double tail2 = tail_norm() * tail_norm();
    const double norm2 = c * c + tail2;
    return c >= -tol * std::sqrt(norm2) && c * c - tail2 >= -tol * norm2;
  }
};

inline ConeVector split_cone_vector(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  embedding_dimension(n);
  const int k = n / 2;
  ConeVector cv{n, x[0], std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (int i = 0; i < k; ++i) cv.v[i] = x[1 + i];
  for (int i = 0; i < k; ++i) {
    const int src = 1 + k + i;
    cv.w[i] = src < n ? x[src] : 0.0;
  }
  return cv;
}

inline bool in_cone(std::span<const double> x, double tol = kConeTolerance) { return split_cone_vector(x).in_cone(tol); }

inline HermitianMatrix embed(std::span<const double> x) {
  const ConeVector cv = split_cone_vector(x);
  const int k = static_cast<int>(cv.v.size());
  const Eigen::Index dim = Eigen::Index{1} << k;
  ComplexMatrix m = cv.c * ComplexMatrix::Identity(dim, dim);
  for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(dim); ++mask) {
    for (int i = 0; i < k; ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if ((mask & bit) != 0) continue;
      // e_v + i e_w below the diagonal, its adjoint above.
      const Complex entry = insertion_sign(mask, i) * Complex(cv.v[i], cv.w[i]);
      m(mask | bit, mask) = entry;
      m(mask, mask | bit) = std::conj(entry);
    }
  }
  return HermitianMatrix(m);
}

/// Same map built from explicit operator products; slower, used to
/// cross-check the direct construction.
inline HermitianMatrix embed_via_operators(std::span<const double> x) {
  const ConeVector cv = split_cone_vector(x);
  const int k = static_cast<int>(cv.v.size());
  if (k == 0) return HermitianMatrix(ComplexMatrix::Constant(1, 1, cv.c));
  const ComplexMatrix ev = creation(k, cv.v);
  const ComplexMatrix ew = creation(k, cv.w);
  const Eigen::Index dim = ev.rows();
  const Complex i(0.0, 1.0);
  return HermitianMatrix(cv.c * ComplexMatrix::Identity(dim, dim) + ev + ev.adjoint() + i * (ew - ew.adjoint()));
}

/// Embeds every vector; inputs outside the cone are still embedded and the
/// result is flagged not_cone_guaranteed.
inline Realization embed_config(const std::vector<std::vector<double>>& xs) {
  if (xs.empty()) throw Error(ErrorCode::ArityError, "embed_config needs at least one vector");
  const std::size_t n = xs.front().size();
  Realization out;
  out.d = embedding_dimension(static_cast<int>(n));
  for (const auto& x : xs) {
    if (x.size() != n) {
      throw Error(ErrorCode::DimMismatch, "vectors of length " + std::to_string(n) + " and " + std::to_string(x.size()));
    }
    if (!in_cone(x)) out.not_cone_guaranteed = true;
    out.matrices.push_back(embed(x));
  }
  return out;
}

}  // namespace psdcone
