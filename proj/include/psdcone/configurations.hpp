#pragma once

// Vector configurations, Gram matrices, and the built-in pentagon and
// hexagon configurations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "psdcone/matrix_core.hpp"
#include "psdcone/rng.hpp"

namespace psdcone {

inline constexpr double kGramSymmetryTol = 1e-12;
inline constexpr double kGramPsdTol = 1e-9;
inline constexpr double kZeroSnap = 1e-14;

/// n vectors in R^m, stored as the rows of an n x m matrix.
struct VectorConfig {
  RealMatrix vectors;
  std::string label;

  int n() const noexcept { return static_cast<int>(vectors.rows()); }
  int m() const noexcept { return static_cast<int>(vectors.cols()); }

  std::vector<double> vector(int k) const {
    std::vector<double> out(m());
    for (int i = 0; i < m(); ++i) out[i] = vectors(k, i);
    return out;
  }

  std::vector<std::vector<double>> as_lists() const {
    std::vector<std::vector<double>> out;
    for (int k = 0; k < n(); ++k) out.push_back(vector(k));
    return out;
  }
};

/// Symmetric PSD n x n real matrix. Construction symmetrizes and rejects
/// inputs that are asymmetric beyond 1e-12 or have an eigenvalue below
/// -1e-9 (both relative to max(1, max |G_jk|)).
class GramMatrix {
 public:
  GramMatrix() = default;

  explicit GramMatrix(const RealMatrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1) {
      throw Error(ErrorCode::DimMismatch, "Gram matrix must be square and non-empty");
    }
    if (!entries.allFinite()) throw Error(ErrorCode::NonFinite, "Gram matrix has NaN or Inf entries");
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > kGramSymmetryTol * scale) {
      throw Error(ErrorCode::NotHermitian, "Gram matrix is not symmetric");
    }
    entries_ = 0.5 * (entries + entries.transpose());
    const double lambda_min = symmetric_eigenvalues(entries_)(0);
    if (lambda_min < -kGramPsdTol * scale) {
      throw Error(ErrorCode::NotPsd, "Gram matrix has eigenvalue " + std::to_string(lambda_min));
    }
  }

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  const RealMatrix& entries() const noexcept { return entries_; }
  double operator()(int j, int k) const { return entries_(j, k); }

 private:
  RealMatrix entries_;
};

/// Throws GramHasNegativeEntry if any entry is below -1e-12; the trivial
/// necessary condition for every realization considered here.
inline void require_nonneg_entries(const GramMatrix& g) {
  const double lo = g.entries().minCoeff();
  if (lo < -1e-12) throw Error(ErrorCode::GramHasNegativeEntry, "Gram matrix has entry " + std::to_string(lo));
}

/// Euclidean Gram matrix; entries with |value| < 1e-14 * max(1, max diag)
/// are snapped to exactly 0.
inline GramMatrix gram(const VectorConfig& config) {
  if (!config.vectors.allFinite()) throw Error(ErrorCode::NonFinite, "configuration has NaN or Inf coordinates");
  RealMatrix g = config.vectors * config.vectors.transpose();
  const double snap = kZeroSnap * std::max(1.0, g.diagonal().maxCoeff());
  g = g.unaryExpr([snap](double x) { return std::abs(x) < snap ? 0.0 : x; });
  return GramMatrix(g);
}

/// v_k = (sqrt(cos(pi/5)), cos(2 pi k/5), sin(2 pi k/5)), k = 0..4.
/// Consecutive vectors have inner product cos(pi/5) + cos(2pi/5) and vectors
/// two apart are orthogonal.
inline VectorConfig pentagon() {
  VectorConfig cfg{RealMatrix(5, 3), "pentagon"};
  const double height = std::sqrt(std::cos(std::numbers::pi / 5.0));
  for (int k = 0; k < 5; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 5.0;
    cfg.vectors.row(k) << height, std::cos(angle), std::sin(angle);
  }
  return cfg;
}

/// v_k = (1, cos(2 pi k/6), sin(2 pi k/6)), k = 0..5; all on the boundary
/// of the spherical cone in R^3, with v_k + v_{k+3} = (2, 0, 0).
inline VectorConfig hexagon() {
  VectorConfig cfg{RealMatrix(6, 3), "hexagon"};
  // Exact unit-circle values so that opposite pairs cancel exactly.
  const double half = 0.5;
  const double s = std::sqrt(3.0) / 2.0;
  const double cosines[6] = {1.0, half, -half, -1.0, -half, half};
  const double sines[6] = {0.0, s, s, 0.0, -s, -s};
  for (int k = 0; k < 6; ++k) cfg.vectors.row(k) << 1.0, cosines[k], sines[k];
  return cfg;
}

/// n unit vectors in R^m with pairwise nonnegative inner products, by
/// rejection sampling Gaussian directions against the accepted set.
inline VectorConfig random_nonneg_config(int n, int m, std::uint64_t seed, long max_attempts = 1'000'000) {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "n and m must be >= 1");
  Rng rng(seed);
  VectorConfig cfg{RealMatrix(n, m), "random_nonneg"};
  RealVector candidate(m);
  int accepted = 0;
  for (long attempt = 0; attempt < max_attempts && accepted < n; ++attempt) {
    for (int i = 0; i < m; ++i) candidate(i) = rng.normal();
    const double norm = candidate.norm();
    if (norm == 0.0) continue;
    candidate /= norm;
    bool ok = true;
    for (int j = 0; j < accepted && ok; ++j) ok = cfg.vectors.row(j).dot(candidate) >= 0.0;
    if (ok) cfg.vectors.row(accepted++) = candidate.transpose();
  }
  if (accepted < n) {
    throw Error(ErrorCode::GenerationFailure,
                "accepted " + std::to_string(accepted) + " of " + std::to_string(n) + " vectors within budget");
  }
  return cfg;
}

/// Rank-revealing factorization G = V V^T with V of numerical rank columns.
/// Eigenvalues below 1e-9 * lambda_max are treated as zero.
inline VectorConfig vectors_from_gram(const GramMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g.entries());
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::SpectralFailure, "Gram eigendecomposition failed");
  const RealVector& lambda = solver.eigenvalues();
  const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
  const double cutoff = kGramPsdTol * lambda_max;
  std::vector<int> kept;
  for (int i = g.n() - 1; i >= 0; --i) {
    if (lambda(i) > cutoff) kept.push_back(i);
  }
  VectorConfig cfg{RealMatrix::Zero(g.n(), std::max<int>(1, static_cast<int>(kept.size()))), "from_gram"};
  for (std::size_t c = 0; c < kept.size(); ++c) {
    cfg.vectors.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(kept[c]) * std::sqrt(lambda(kept[c]));
  }
  return cfg;
}

}  // namespace psdcone
