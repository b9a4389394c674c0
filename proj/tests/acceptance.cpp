// Acceptance gate: runs every criterion at its stated tolerance and budget and
// prints one PASS/FAIL line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "psdcone/psdcone.hpp"

using namespace psdcone;

namespace {

// Frozen regression floors, measured once with the default search settings.
// Hexagon orthant search: best 0.0264986 at m = 6, 8, 12.
constexpr double kHexagonOrthantFloor = 0.026;
// Pentagon PSD search: best 0.0619 at d = 8, 16 (0.0695 at d = 4, 0.103 at d = 2).
constexpr double kPentagonPsdFloor = 0.06;
// Pentagon diagnostics on the best candidates: max defect >= 1.078 at every d.
constexpr double kPentagonDefectFloor = 1.0;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<double> gaussian(int n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SearchOptions search(int restarts, std::uint64_t seed, int max_iters = 20000) {
  SearchOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  opt.max_iters = max_iters;
  return opt;
}

Outcome car_identities() {
  Rng rng(101);
  double worst = 0.0;
  for (int k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto v = gaussian(k, rng);
      const auto w = gaussian(k, rng);
      const double scale = 1.0 + std::sqrt(dot(v, v) * dot(w, w));
      worst = std::max(worst, car_residual(k, v, w) / scale);
    }
  }
  return {worst <= 1e-12, fmt("max residual / (1+|v||w|) = %.3e", worst)};
}

Outcome isometry_and_positivity() {
  Rng rng(202);
  double iso = 0.0, pos = 0.0, square = 0.0;
  for (int n : {3, 5, 7, 9, 11}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto x = gaussian(n, rng);
      const auto y = gaussian(n, rng);
      const double euclid = dot(x, y);
      const double err = std::abs(trace_inner_product(embed(x), embed(y)) - euclid);
      iso = std::max(iso, err / std::max(1.0, std::sqrt(dot(x, x) * dot(y, y))));
    }
    for (int trial = 0; trial < 500; ++trial) {
      auto x = gaussian(n, rng);
      const double tail = std::sqrt(dot(x, x) - x[0] * x[0]);
      x[0] = trial % 10 == 0 ? tail : tail * (1.0 + rng.uniform());  // every tenth on the boundary
      const double lambda = min_eigenvalue(embed(x));
      pos = std::max(pos, -lambda / std::sqrt(dot(x, x)));
    }
    for (int trial = 0; trial < 50; ++trial) {
      auto x = gaussian(n, rng);
      x[0] = 0.0;
      const HermitianMatrix a = embed(x);
      const ComplexMatrix expected = dot(x, x) * ComplexMatrix::Identity(a.dim(), a.dim());
      square = std::max(square, (a.matrix() * a.matrix() - expected).norm() / expected.norm());
    }
  }
  const bool ok = iso <= 1e-11 && pos <= 1e-11 && square <= 1e-12;
  return {ok, fmt("isometry rel err %.3e, worst -lambda_min/|x| %.3e, square identity rel err %.3e", iso, pos, square)};
}

Outcome pentagon_gram() {
  const GramMatrix g = gram(pentagon());
  const double adjacent = std::cos(std::numbers::pi / 5) + std::cos(2 * std::numbers::pi / 5);
  double adj_err = 0.0;
  bool skip_zero = true;
  for (int k = 0; k < 5; ++k) {
    adj_err = std::max(adj_err, std::abs(g(k, (k + 1) % 5) - adjacent));
    adj_err = std::max(adj_err, std::abs(g(k, (k + 4) % 5) - adjacent));
    skip_zero = skip_zero && g(k, (k + 2) % 5) == 0.0 && g(k, (k + 3) % 5) == 0.0;
  }
  const double min_entry = g.entries().minCoeff();
  const bool ok = adj_err <= 1e-14 && skip_zero && min_entry >= 0.0;
  return {ok, fmt("adjacent err %.3e, skip-2 entries exactly zero: %.0f, min entry %.3e", adj_err, skip_zero ? 1 : 0,
                  min_entry)};
}

Outcome hexagon_split() {
  const GramMatrix g = gram(hexagon());
  const LadderResult ladder = realize_ladder(g, 2, search(20, 401));
  const bool ladder_ok = ladder.succeeded && ladder.result.realization.d <= 2 &&
                         verify_realization(g, ladder.result.realization, 1e-9, 1e-6).passed();
  const bool embed_ok = verify_realization(g, embed_config(hexagon().as_lists()), 1e-12, 1e-12).passed() &&
                        embedding_dimension(3) == 2;
  double best_orthant = INFINITY;
  for (int m : {6, 8, 12}) {
    best_orthant = std::min(best_orthant, factorize_nonneg(g, m, search(100, 402)).second.best_residual);
  }
  const bool orthant_ok = best_orthant >= 1e-3 && best_orthant > kHexagonOrthantFloor;
  char buf[256];
  std::snprintf(buf, sizeof buf, "PSD residual %.3e at d=%d (embedding check %s), orthant best residual %.6f (floor %.3f)",
                ladder.result.report.best_residual, ladder.result.realization.d, embed_ok ? "ok" : "FAILED",
                best_orthant, kHexagonOrthantFloor);
  return {ladder_ok && embed_ok && orthant_ok, buf};
}

Outcome pentagon_evidence() {
  const GramMatrix g = gram(pentagon());
  double best = INFINITY, min_defect = INFINITY;
  std::string per_d;
  for (int d : {2, 4, 8, 16}) {
    const RealizeResult res = realize(g, d, d, search(100, 500 + d));
    const PentagonDiagnostics diag = pentagon_psd_diagnostics(res.realization);
    best = std::min(best, res.report.best_residual);
    min_defect = std::min(min_defect, diag.max_defect);
    per_d += fmt(" d=%.0f:%.4f/%.3f", d, res.report.best_residual, diag.max_defect);
  }
  const bool ok = best >= 1e-3 && best > kPentagonPsdFloor && min_defect > kPentagonDefectFloor;
  return {ok, fmt("best residual %.6f (floor %.3f), min chain defect %.4f", best, kPentagonPsdFloor, min_defect) +
                  fmt(" (floor %.1f); residual/defect", kPentagonDefectFloor) + per_d};
}

Outcome small_completeness() {
  int factorized = 0, realized = 0;
  double worst_f = 0.0, worst_r = 0.0;
  for (int s = 0; s < 100; ++s) {
    const GramMatrix g = gram(random_nonneg_config(4, 4, 1000 + s));
    auto f = factorize_nonneg(g, 4, search(50, s));
    if (!f.second.converged) f = factorize_nonneg(g, 4, search(200, s + 7919));
    factorized += f.second.converged ? 1 : 0;
    worst_f = std::max(worst_f, f.second.best_residual);
    const LadderResult lad = realize_ladder(g, 4, search(20, s));
    realized += lad.succeeded ? 1 : 0;
    worst_r = std::max(worst_r, lad.result.report.best_residual);
  }
  return {factorized == 100 && realized == 100,
          fmt("factorized %.0f/100 (worst %.2e), realized at d<=4 %.0f/100", factorized, worst_f, realized) +
              fmt(" (worst %.2e)", worst_r)};
}

Outcome oracles() {
  Rng rng(707);
  bool wedge_ok = true;
  for (int k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto v = gaussian(k, rng);
      wedge_ok = wedge_ok && creation(k, v) == oracle::wedge_creation(k, v);
    }
  }
  int scalar_agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    RealMatrix gm;
    if (trial % 2 == 0) {
      RealVector a(n);
      for (int k = 0; k < n; ++k) a(k) = rng.uniform(0.1, 2.0);
      gm = a * a.transpose();
    } else {
      gm = gram(random_nonneg_config(n, 3, 5000 + trial)).entries();
    }
    const bool expected = oracle::scalar_realizable(gm, 1e-6);
    const bool found = realize(GramMatrix(gm), 1, 1, search(6, trial, 5000)).report.converged;
    scalar_agree += expected == found ? 1 : 0;
  }
  int recovered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 5, m = 3 + trial % 6;
    RealMatrix b(m, n);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    if (b.colwise().norm().minCoeff() == 0.0) b(0, 0) += 0.5;
    recovered += factorize_nonneg(GramMatrix(b.transpose() * b), m, search(20, trial)).second.best_residual < 1e-6;
  }
  return {wedge_ok && scalar_agree == 100 && recovered == 50,
          fmt("wedge oracle exact: %.0f, d=1 decisions agree %.0f/100, ", wedge_ok ? 1 : 0, scalar_agree) +
              fmt("planted recovered %.0f/50", recovered)};
}

Outcome gradients() {
  Rng rng(808);
  double worst_orthant = 0.0, worst_psd = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 5, n = 2 + trial % 4;
    RealMatrix b(m, n);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform();
    const RealMatrix g = gram(random_nonneg_config(n, 3, 9000 + trial)).entries();
    const RealMatrix analytic = orthant_gradient(b, g);
    const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    const Eigen::VectorXd fd = oracle::finite_difference_gradient(
        [&](const Eigen::VectorXd& y) { return orthant_objective(Eigen::Map<const RealMatrix>(y.data(), m, n), g); }, x);
    const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(analytic.data(), analytic.size());
    worst_orthant = std::max(worst_orthant, (a - fd).norm() / std::max(1.0, a.norm()));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4, d = 1 + trial % 4, r = 1 + trial % d;
    const RealMatrix g = gram(random_nonneg_config(n, 3, 9500 + trial)).entries();
    FactorPoint p;
    for (int k = 0; k < n; ++k) {
      ComplexMatrix c(d, r);
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(rng.normal(), rng.normal());
      p.factors.push_back(c);
    }
    const Eigen::VectorXd x = detail::flatten(p);
    const Eigen::VectorXd a = detail::flatten(realization_gradient(p, g));
    const Eigen::VectorXd fd = oracle::finite_difference_gradient(
        [&](const Eigen::VectorXd& y) { return realization_objective(detail::unflatten(y, n, d, r), g); }, x);
    worst_psd = std::max(worst_psd, (a - fd).norm() / std::max(1.0, a.norm()));
  }
  return {worst_orthant <= 1e-5 && worst_psd <= 1e-5,
          fmt("orthant rel err %.3e, PSD rel err %.3e", worst_orthant, worst_psd)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1 anticommutation relations", 5.0, car_identities},
      {"AC2 embedding isometry and positivity", 30.0, isometry_and_positivity},
      {"AC3 pentagon Gram exactness", 5.0, pentagon_gram},
      {"AC4 hexagon PSD-realizable, not orthant-realizable", 300.0, hexagon_split},
      {"AC5 pentagon non-realizability evidence", 600.0, pentagon_evidence},
      {"AC6 completeness for four vectors", 600.0, small_completeness},
      {"AC7 oracles", 300.0, oracles},
      {"AC8 gradient checks", 30.0, gradients},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_seconds;
    const bool passed = outcome.passed && in_budget;
    failures += passed ? 0 : 1;
    std::printf("[%s] %s: %s (%.1f s, budget %.0f s%s)\n", passed ? "PASS" : "FAIL", c.name, outcome.detail.c_str(),
                secs, c.budget_seconds, in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
