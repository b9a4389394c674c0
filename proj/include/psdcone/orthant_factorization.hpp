#pragma once

// Entrywise-nonnegative factorizations G = B^T B, diagonal realizations built
// from them, and the sign-parity diagnostics for the hexagon configuration.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "psdcone/configurations.hpp"
#include "psdcone/matrix_core.hpp"
#include "psdcone/realization.hpp"
#include "psdcone/rng.hpp"
#include "psdcone/search.hpp"

namespace psdcone {

struct NonnegFactorization {
  RealMatrix b;           // m x n, every entry >= 0
  double residual = 0.0;  // ||B^T B - G||_F / ||G||_F

  int m() const noexcept { return static_cast<int>(b.rows()); }
  int n() const noexcept { return static_cast<int>(b.cols()); }
};

/// f(B) = ||B^T B - G||_F^2.
inline double orthant_objective(const RealMatrix& b, const RealMatrix& g) { return (b.transpose() * b - g).squaredNorm(); }

/// grad f(B) = 4 B (B^T B - G).
inline RealMatrix orthant_gradient(const RealMatrix& b, const RealMatrix& g) {
  return 4.0 * b * (b.transpose() * b - g);
}

inline int default_inner_dim(int n) { return n * (n + 1) / 2; }

/// Multistart projected gradient search for B >= 0 (m x n) with B^T B = G.
/// Restart r starts from B_ij ~ U[0, sqrt(max_j G_jj / m)] drawn from the
/// stream mix_seed(seed, r).
inline std::pair<NonnegFactorization, SearchReport> factorize_nonneg(const GramMatrix& g, int m,
                                                                     const SearchOptions& opt) {
  require_nonneg_entries(g);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "inner dimension m must be >= 1");
  if (opt.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  const int n = g.n();
  const RealMatrix& target = g.entries();
  const double scale = target.norm() > 0.0 ? target.norm() : 1.0;
  const double init_hi = std::sqrt(std::max(target.diagonal().maxCoeff(), 0.0) / m);

  const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const Eigen::Map<const RealMatrix> b(x.data(), m, n);
    const RealMatrix resid = b.transpose() * b - target;
    if (grad != nullptr) {
      Eigen::Map<RealMatrix>(grad->data(), m, n) = 4.0 * b * resid;
    }
    return resid.squaredNorm();
  };
  const Projection clamp = [](Eigen::VectorXd& x) { x = x.cwiseMax(0.0); };

  const auto runs = run_restarts<DescentResult>(opt.restarts, opt.threads, [&](int r) {
    Rng rng(mix_seed(opt.seed, static_cast<std::uint64_t>(r)));
    Eigen::VectorXd x0(static_cast<Eigen::Index>(m) * n);
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = rng.uniform(0.0, init_hi);
    return projected_descent(std::move(x0), objective, clamp, scale, opt, r);
  });
  SearchReport report = summarize(runs, opt);
  NonnegFactorization best{Eigen::Map<const RealMatrix>(runs[report.best_restart].x.data(), m, n),
                           report.best_residual};
  return {std::move(best), std::move(report)};
}

inline std::pair<NonnegFactorization, SearchReport> factorize_nonneg(const GramMatrix& g, int m, int restarts,
                                                                     int max_iters, std::uint64_t seed) {
  SearchOptions opt;
  opt.restarts = restarts;
  opt.max_iters = max_iters;
  opt.seed = seed;
  return factorize_nonneg(g, m, opt);
}

/// A_k = sqrt(d) diag(v_k) for vectors in the nonnegative orthant of R^d.
/// Entries in [-1e-12, 0) are clamped to 0.
inline Realization diagonal_realization(const VectorConfig& config) {
  if (config.vectors.size() > 0 && config.vectors.minCoeff() < -1e-12) {
    throw Error(ErrorCode::NotInOrthant, "vector entry " + std::to_string(config.vectors.minCoeff()) + " is negative");
  }
  const int d = config.m();
  Realization out;
  out.d = d;
  const double root_d = std::sqrt(static_cast<double>(d));
  for (int k = 0; k < config.n(); ++k) {
    out.matrices.push_back(HermitianMatrix::diagonal(root_d * config.vectors.row(k).transpose().cwiseMax(0.0)));
  }
  return out;
}

/// Maps v_k to the k-th column of B, then embeds diagonally.
inline Realization realization_from_factorization(const NonnegFactorization& f, double threshold) {
  if (!(f.residual < threshold)) {
    throw Error(ErrorCode::ResidualTooHigh,
                "factorization residual " + std::to_string(f.residual) + " >= " + std::to_string(threshold));
  }
  VectorConfig columns{f.b.transpose(), "factorization"};
  Realization out = diagonal_realization(columns);
  out.gram_residual = f.residual;
  return out;
}

/// How far six orthant vectors a_0..a_5 are from the structure an exact
/// hexagon realization would be forced into: a common midpoint
/// e = (a_k + a_{k+3}) / 2, offsets b_k = a_k - e that are coordinatewise
/// +-e, and b_0 + b_2 + b_4 = 0. The last two are incompatible for e != 0.
struct HexagonDiagnostics {
  double gram_residual = 0.0;     // vs gram(hexagon()), relative Frobenius
  double midpoint_defect = 0.0;   // max_k |(a_k + a_{k+3})/2 - e|
  double sign_defect = 0.0;       // max_{k,i} min_s |b_k[i] - s e[i]|
  double sum_defect = 0.0;        // |b_0 + b_2 + b_4|
  double midpoint_norm = 0.0;     // |e|
  std::vector<double> sign_defect_per_vector;  // max_i min_s |b_k[i] - s e[i]|, k = 0..5
  std::string max_link;           // name of the largest defect
  double max_defect = 0.0;
};

inline HexagonDiagnostics hexagon_orthant_diagnostics(const RealMatrix& candidate, double tol = 1e-12) {
  if (candidate.cols() != 6) {
    throw Error(ErrorCode::ArityError, "expected 6 candidate vectors, got " + std::to_string(candidate.cols()));
  }
  if (candidate.size() > 0 && candidate.minCoeff() < -tol) {
    throw Error(ErrorCode::NotInOrthant, "candidate has entry " + std::to_string(candidate.minCoeff()));
  }
  const RealMatrix a = candidate.cwiseMax(0.0);
  HexagonDiagnostics out;
  out.gram_residual = relative_residual(a.transpose() * a, gram(hexagon()).entries());

  const Eigen::VectorXd e = 0.5 * (a.col(0) + a.col(3));
  out.midpoint_norm = e.norm();
  for (int k = 1; k < 3; ++k) {
    out.midpoint_defect = std::max(out.midpoint_defect, (0.5 * (a.col(k) + a.col(k + 3)) - e).norm());
  }
  std::vector<Eigen::VectorXd> offsets;
  for (int k = 0; k < 6; ++k) {
    offsets.push_back(a.col(k) - e);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double bi = offsets.back()(i);
      worst = std::max(worst, std::min(std::abs(bi - e(i)), std::abs(bi + e(i))));
    }
    out.sign_defect_per_vector.push_back(worst);
    out.sign_defect = std::max(out.sign_defect, worst);
  }
  out.sum_defect = (offsets[0] + offsets[2] + offsets[4]).norm();

  const std::pair<const char*, double> links[] = {
      {"midpoint", out.midpoint_defect}, {"sign", out.sign_defect}, {"sum", out.sum_defect}};
  out.max_link = links[0].first;
  out.max_defect = links[0].second;
  for (const auto& [name, value] : links) {
    if (value > out.max_defect) {
      out.max_link = name;
      out.max_defect = value;
    }
  }
  return out;
}

}  // namespace psdcone
