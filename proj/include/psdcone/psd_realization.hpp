#pragma once

// Search for PSD matrices A_1..A_n in dimension d with (1/d) Tr(A_j A_k)
// equal to a target Gram matrix, verification of candidate realizations, and
// diagnostics for the pentagon configuration.
//
// The search is over factors A_k = C_k C_k^* with C_k a d x r complex matrix,
// so positivity holds by construction. The objective is
//
//   f(C) = sum_{j,k} (P_jk - G_jk)^2,   P_jk = (1/d) Re Tr(A_j A_k),
//
// i.e. sum_{j<=k} w_jk (P_jk - G_jk)^2 with w = 2 off the diagonal and 1 on
// it. Its real gradient (d/dRe + i d/dIm) with respect to C_j is
//
//   grad_j = (8/d) sum_k (P_jk - G_jk) A_k C_j.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psdcone/configurations.hpp"
#include "psdcone/matrix_core.hpp"
#include "psdcone/realization.hpp"
#include "psdcone/rng.hpp"
#include "psdcone/search.hpp"

namespace psdcone {

struct FactorPoint {
  std::vector<ComplexMatrix> factors;  // each d x r

  int n() const noexcept { return static_cast<int>(factors.size()); }
  int d() const noexcept { return factors.empty() ? 0 : static_cast<int>(factors.front().rows()); }
  int r() const noexcept { return factors.empty() ? 0 : static_cast<int>(factors.front().cols()); }

  std::vector<ComplexMatrix> products() const {
    std::vector<ComplexMatrix> out;
    out.reserve(factors.size());
    for (const auto& c : factors) out.push_back(c * c.adjoint());
    return out;
  }
};

namespace detail {

inline RealMatrix pairwise_trace(const std::vector<ComplexMatrix>& a, int d) {
  const int n = static_cast<int>(a.size());
  RealMatrix p(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      p(j, k) = p(k, j) = (a[j].array() * a[k].array().conjugate()).sum().real() / d;
    }
  }
  return p;
}

// Objective over the flat layout: n blocks of d*r complex entries,
// column-major, stored as interleaved (re, im) doubles.
inline double flat_objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad, const RealMatrix& target, int d,
                             int r) {
  const int n = static_cast<int>(target.rows());
  const Eigen::Index block = static_cast<Eigen::Index>(d) * r;
  const auto* data = reinterpret_cast<const Complex*>(x.data());
  std::vector<ComplexMatrix> a(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Map<const ComplexMatrix> c(data + k * block, d, r);
    a[k] = c * c.adjoint();
  }
  const RealMatrix resid = pairwise_trace(a, d) - target;
  if (grad != nullptr) {
    auto* g = reinterpret_cast<Complex*>(grad->data());
    for (int j = 0; j < n; ++j) {
      ComplexMatrix weighted = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < n; ++k) weighted += resid(j, k) * a[k];
      const Eigen::Map<const ComplexMatrix> c(data + j * block, d, r);
      Eigen::Map<ComplexMatrix>(g + j * block, d, r) = (8.0 / d) * weighted * c;
    }
  }
  return resid.squaredNorm();
}

inline Eigen::VectorXd flatten(const FactorPoint& p) {
  const Eigen::Index block = static_cast<Eigen::Index>(p.d()) * p.r();
  Eigen::VectorXd x(2 * block * p.n());
  auto* data = reinterpret_cast<Complex*>(x.data());
  for (int k = 0; k < p.n(); ++k) Eigen::Map<ComplexMatrix>(data + k * block, p.d(), p.r()) = p.factors[k];
  return x;
}

inline FactorPoint unflatten(const Eigen::VectorXd& x, int n, int d, int r) {
  const Eigen::Index block = static_cast<Eigen::Index>(d) * r;
  const auto* data = reinterpret_cast<const Complex*>(x.data());
  FactorPoint p;
  for (int k = 0; k < n; ++k) p.factors.emplace_back(Eigen::Map<const ComplexMatrix>(data + k * block, d, r));
  return p;
}

inline void check_search_args(const GramMatrix& g, int d, int r) {
  require_nonneg_entries(g);
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be >= 1");
  if (d > kMaxMatrixDim) throw Error(ErrorCode::DimensionCap, "d = " + std::to_string(d) + " exceeds cap");
  if (r < 1 || r > d) throw Error(ErrorCode::InvalidArgument, "rank r must satisfy 1 <= r <= d");
}

}  // namespace detail

/// f(C) as documented at the top of this header.
inline double realization_objective(const FactorPoint& p, const RealMatrix& target) {
  return detail::flat_objective(detail::flatten(p), nullptr, target, p.d(), p.r());
}

inline FactorPoint realization_gradient(const FactorPoint& p, const RealMatrix& target) {
  const Eigen::VectorXd x = detail::flatten(p);
  Eigen::VectorXd grad(x.size());
  detail::flat_objective(x, &grad, target, p.d(), p.r());
  return detail::unflatten(grad, p.n(), p.d(), p.r());
}

/// Embeds a factor point into a larger (d, r) as a direct summand with a zero
/// block, rescaled by (d_new/d)^{1/4} so that every (1/d) Tr(A_j A_k) is
/// preserved.
inline FactorPoint pad_factor_point(const FactorPoint& p, int d_new, int r_new) {
  if (d_new < p.d() || r_new < p.r()) throw Error(ErrorCode::InvalidArgument, "padding cannot shrink a factor point");
  const double s = std::pow(static_cast<double>(d_new) / p.d(), 0.25);
  FactorPoint out;
  for (const auto& c : p.factors) {
    ComplexMatrix padded = ComplexMatrix::Zero(d_new, r_new);
    padded.topLeftCorner(p.d(), p.r()) = s * c;
    out.factors.push_back(std::move(padded));
  }
  return out;
}

inline Realization realization_from_factors(const FactorPoint& p) {
  Realization out;
  out.d = p.d();
  for (const auto& a : p.products()) out.matrices.emplace_back(a);
  return out;
}

struct RealizeResult {
  Realization realization;
  SearchReport report;
  FactorPoint factors;
};

/// Multistart search in dimension d with factor rank r. Restart r starts from
/// i.i.d. complex Gaussian factors scaled so that E[(1/d) Tr(A_j^2)] = G_jj;
/// with a warm start, restart 0 starts from it instead (padded to (d, r)).
inline RealizeResult realize(const GramMatrix& g, int d, int r, const SearchOptions& opt,
                             const std::optional<FactorPoint>& warm_start = std::nullopt) {
  detail::check_search_args(g, d, r);
  if (opt.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  const int n = g.n();
  const RealMatrix& target = g.entries();
  const double scale = target.norm() > 0.0 ? target.norm() : 1.0;
  if (warm_start && warm_start->n() != n) throw Error(ErrorCode::ArityError, "warm start has wrong arity");

  const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    return detail::flat_objective(x, grad, target, d, r);
  };
  const Projection identity = [](Eigen::VectorXd&) {};

  const auto runs = run_restarts<DescentResult>(opt.restarts, opt.threads, [&](int restart) {
    if (restart == 0 && warm_start) {
      return projected_descent(detail::flatten(pad_factor_point(*warm_start, d, r)), objective, identity, scale, opt, 0);
    }
    Rng rng(mix_seed(opt.seed, static_cast<std::uint64_t>(restart)));
    FactorPoint init;
    for (int k = 0; k < n; ++k) {
      // E|c|^2 = sigma2 gives E[(1/d) Tr(A^2)] = sigma2^2 r (d + r).
      const double sigma2 = std::sqrt(std::max(target(k, k), 0.0) / (static_cast<double>(r) * (d + r)));
      const double sd = std::sqrt(sigma2 / 2.0);
      ComplexMatrix c(d, r);
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        c(i) = Complex(sd * re, sd * im);
      }
      init.factors.push_back(std::move(c));
    }
    return projected_descent(detail::flatten(init), objective, identity, scale, opt, restart);
  });
  SearchReport report = summarize(runs, opt);
  FactorPoint best = detail::unflatten(runs[report.best_restart].x, n, d, r);
  Realization real = realization_from_factors(best);
  real.gram_residual = relative_residual(real.gram(), target);
  return {std::move(real), std::move(report), std::move(best)};
}

struct LadderStep {
  int d = 0;
  double best_residual = 0.0;
};

struct LadderResult {
  RealizeResult result;  // first successful step, or the last one
  std::vector<LadderStep> steps;
  bool succeeded = false;
};

/// Dimensions 1, 2, 4, ... up to d_max (d_max itself is always tried last).
inline std::vector<int> ladder_dimensions(int d_max) {
  if (d_max < 1) throw Error(ErrorCode::InvalidArgument, "d_max must be >= 1");
  std::vector<int> dims;
  for (int d = 1; d < d_max; d *= 2) dims.push_back(d);
  dims.push_back(d_max);
  return dims;
}

/// Escalates d along the ladder, warm-starting each step from the previous
/// best, and stops at the first step whose best residual is below 1e-6.
/// A rank of 0 means full rank (r = d) at every step.
inline LadderResult realize_ladder(const GramMatrix& g, int d_max, const SearchOptions& opt, int rank = 0) {
  LadderResult out;
  std::optional<FactorPoint> warm;
  for (int d : ladder_dimensions(d_max)) {
    const int r = rank > 0 ? std::min(rank, d) : d;
    out.result = realize(g, d, r, opt, warm);
    out.steps.push_back({d, out.result.report.best_residual});
    if (out.result.report.converged) {
      out.succeeded = true;
      break;
    }
    warm = out.result.factors;
  }
  return out;
}

struct VerificationReport {
  std::vector<double> min_eigenvalues;
  RealMatrix gram_residual_matrix;  // produced - target
  double gram_residual = 0.0;       // relative Frobenius
  bool psd_ok = false;
  bool gram_ok = false;
  std::vector<int> failing_psd_indices;
  bool passed() const noexcept { return psd_ok && gram_ok; }
};

/// Pure check: every matrix has min eigenvalue >= -tol_psd and the relative
/// Gram residual is <= tol_gram.
inline VerificationReport verify_realization(const GramMatrix& g, const Realization& real, double tol_psd,
                                             double tol_gram) {
  if (real.n() != g.n()) {
    throw Error(ErrorCode::ArityError,
                "realization has " + std::to_string(real.n()) + " matrices, Gram is " + std::to_string(g.n()));
  }
  real.check_consistent();
  VerificationReport out;
  out.psd_ok = true;
  for (int k = 0; k < real.n(); ++k) {
    const double lambda = min_eigenvalue(real.matrices[k]);
    out.min_eigenvalues.push_back(lambda);
    if (lambda < -tol_psd) {
      out.psd_ok = false;
      out.failing_psd_indices.push_back(k);
    }
  }
  const RealMatrix produced = real.gram();
  out.gram_residual_matrix = produced - g.entries();
  out.gram_residual = relative_residual(produced, g.entries());
  out.gram_ok = out.gram_residual <= tol_gram;
  return out;
}

/// Defects measuring how far five PSD matrices are from the chain of
/// identities an exact pentagon realization would have to satisfy:
///   (i)   A_k A_{k+-2} = 0,
///   (ii)  A_{k+-1} lies in span{A_k, A_{k+2}, A_{k-2}},
///   (iii) A_0 and A_1 are proportional,
/// where (iii) contradicts <v_0, v_1> < |v_0||v_1|.
struct PentagonDiagnostics {
  double gram_residual = 0.0;            // vs gram(pentagon()), relative Frobenius
  std::vector<double> product_norms;     // |A_k A_{k+2}|_F, |A_k A_{k-2}|_F for k = 0..4 (10 values)
  double max_product_norm = 0.0;
  std::vector<double> span_residuals;    // relative LS residual of A_{k+1}, A_{k-1} for k = 0..4 (10 values)
  double max_span_residual = 0.0;
  double collinearity_plus = 0.0;        // |A0/|A0| - A1/|A1||_F
  double collinearity_minus = 0.0;       // |A0/|A0| + A1/|A1||_F
  double collinearity_defect = 0.0;      // min of the two
  std::string max_link;                  // "product", "span" or "collinearity"
  double max_defect = 0.0;
  std::string first_violated_link;       // first link above the threshold, or "none"
};

namespace detail {

inline Eigen::VectorXd real_vectorize(const ComplexMatrix& m) {
  Eigen::VectorXd out(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out(2 * i) = m(i).real();
    out(2 * i + 1) = m(i).imag();
  }
  return out;
}

inline double span_residual(const ComplexMatrix& target, const std::vector<const ComplexMatrix*>& basis) {
  RealMatrix a(2 * target.size(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) a.col(static_cast<Eigen::Index>(c)) = real_vectorize(*basis[c]);
  const Eigen::VectorXd b = real_vectorize(target);
  const double norm = b.norm();
  if (norm == 0.0) return 0.0;
  const Eigen::VectorXd coeffs = a.completeOrthogonalDecomposition().solve(b);
  return (a * coeffs - b).norm() / norm;
}

}  // namespace detail

inline PentagonDiagnostics pentagon_psd_diagnostics(const Realization& real, double threshold = 1e-3) {
  if (real.n() != 5) throw Error(ErrorCode::ArityError, "expected 5 matrices, got " + std::to_string(real.n()));
  real.check_consistent();
  PentagonDiagnostics out;
  out.gram_residual = relative_residual(real.gram(), gram(pentagon()).entries());
  const auto idx = [](int k) { return ((k % 5) + 5) % 5; };
  const auto& A = real.matrices;

  for (int k = 0; k < 5; ++k) {
    for (int step : {2, -2}) {
      const double norm = (A[k].matrix() * A[idx(k + step)].matrix()).norm();
      out.product_norms.push_back(norm);
      out.max_product_norm = std::max(out.max_product_norm, norm);
    }
  }
  for (int k = 0; k < 5; ++k) {
    const std::vector<const ComplexMatrix*> basis{&A[k].matrix(), &A[idx(k + 2)].matrix(), &A[idx(k - 2)].matrix()};
    for (int step : {1, -1}) {
      const double res = detail::span_residual(A[idx(k + step)].matrix(), basis);
      out.span_residuals.push_back(res);
      out.max_span_residual = std::max(out.max_span_residual, res);
    }
  }
  const double n0 = A[0].frobenius_norm();
  const double n1 = A[1].frobenius_norm();
  if (n0 > 0.0 && n1 > 0.0) {
    const ComplexMatrix u0 = A[0].matrix() / n0;
    const ComplexMatrix u1 = A[1].matrix() / n1;
    out.collinearity_plus = (u0 - u1).norm();
    out.collinearity_minus = (u0 + u1).norm();
  } else {
    // A zero matrix is proportional to anything.
    out.collinearity_plus = out.collinearity_minus = 0.0;
  }
  out.collinearity_defect = std::min(out.collinearity_plus, out.collinearity_minus);

  const std::pair<const char*, double> links[] = {{"product", out.max_product_norm},
                                                  {"span", out.max_span_residual},
                                                  {"collinearity", out.collinearity_defect}};
  out.max_link = links[0].first;
  out.max_defect = links[0].second;
  out.first_violated_link = "none";
  for (const auto& [name, value] : links) {
    if (value > out.max_defect) {
      out.max_link = name;
      out.max_defect = value;
    }
    if (out.first_violated_link == "none" && value > threshold) out.first_violated_link = name;
  }
  return out;
}

}  // namespace psdcone
