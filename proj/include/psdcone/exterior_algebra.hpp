#pragma once

// Creation and annihilation operators on the exterior algebra of R^k,
// represented as dense 2^k x 2^k matrices.
//
// Basis: bit masks 0 .. 2^k - 1 in increasing order. Mask S stands for the
// ascending wedge monomial e_{i1} ^ ... ^ e_{ir} with {i1 < ... < ir} = S,
// so mask 0 is the scalar 1. Wedging e_i onto e_S moves e_i past every
// j in S with j < i, giving the sign (-1)^{popcount(S & ((1 << i) - 1))}.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psdcone/matrix_core.hpp"
#include "psdcone/rng.hpp"

namespace psdcone {

inline constexpr int kMaxExteriorRank = 12;

constexpr double insertion_sign(std::uint32_t mask, int index) noexcept {
  const std::uint32_t below = mask & ((std::uint32_t{1} << index) - 1U);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

namespace detail {
inline void check_exterior_args(int k, std::size_t len) {
  if (k < 1 || k > kMaxExteriorRank) {
    throw Error(ErrorCode::RankOutOfRange, "k = " + std::to_string(k) + " outside [1, 12]");
  }
  if (len != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::DimMismatch,
                "vector has length " + std::to_string(len) + ", expected " + std::to_string(k));
  }
}
}  // namespace detail

/// Matrix of u -> v ^ u.
inline ComplexMatrix creation(int k, std::span<const double> v) {
  detail::check_exterior_args(k, v.size());
  const Eigen::Index dim = Eigen::Index{1} << k;
  ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(dim); ++mask) {
    for (int i = 0; i < k; ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      if ((mask & bit) != 0 || v[i] == 0.0) continue;
      op(mask | bit, mask) = v[i] * insertion_sign(mask, i);
    }
  }
  return op;
}

inline ComplexMatrix annihilation(int k, std::span<const double> v) { return creation(k, v).adjoint(); }

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

struct CarReport {
  int k = 0;
  int trials = 0;
  double max_residual = 0.0;         // max Frobenius residual over all identities and trials
  double max_scaled_residual = 0.0;  // max of residual / (1 + |v||w|)
  bool passed = false;
};

/// Residuals of {e_v, e_w} = 0, {e*_v, e*_w} = 0 and {e_v, e*_w} = <v,w> I.
inline double car_residual(int k, std::span<const double> v, std::span<const double> w) {
  const ComplexMatrix cv = creation(k, v);
  const ComplexMatrix cw = creation(k, w);
  const ComplexMatrix av = cv.adjoint();
  const ComplexMatrix aw = cw.adjoint();
  double dot = 0.0;
  for (int i = 0; i < k; ++i) dot += v[i] * w[i];
  const Eigen::Index dim = cv.rows();
  const double r1 = anticommutator(cv, cw).norm();
  const double r2 = anticommutator(av, aw).norm();
  const double r3 = (anticommutator(cv, aw) - dot * ComplexMatrix::Identity(dim, dim)).norm();
  return std::max({r1, r2, r3});
}

/// Checks the canonical anticommutation relations on `trials` random
/// Gaussian vector pairs. Passes iff every residual is at most
/// 1e-12 * (1 + |v||w|).
inline CarReport verify_car(int k, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  Rng rng(seed);
  CarReport report{k, trials, 0.0, 0.0, true};
  std::vector<double> v(k), w(k);
  for (int t = 0; t < trials; ++t) {
    double nv = 0.0, nw = 0.0;
    for (int i = 0; i < k; ++i) {
      v[i] = rng.normal();
      w[i] = rng.normal();
      nv += v[i] * v[i];
      nw += w[i] * w[i];
    }
    const double residual = car_residual(k, v, w);
    const double scaled = residual / (1.0 + std::sqrt(nv * nw));
    report.max_residual = std::max(report.max_residual, residual);
    report.max_scaled_residual = std::max(report.max_scaled_residual, scaled);
  }
  report.passed = report.max_scaled_residual <= 1e-12;
  return report;
}

}  // namespace psdcone
