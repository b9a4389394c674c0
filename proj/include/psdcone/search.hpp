#pragma once

// Multistart projected gradient descent shared by the orthant factorization
// and PSD realization searches.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace psdcone {

inline constexpr double kSuccessResidual = 1e-6;

struct SearchOptions {
  int restarts = 20;
  int max_iters = 20000;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
  double armijo = 1e-4;
  double target_residual = 1e-10;
  double stagnation_tol = 1e-12;
  int stagnation_window = 50;
  int trace_stride = 25;
};

struct TracePoint {
  int restart = 0;
  int iteration = 0;
  double residual = 0.0;
};

struct SearchReport {
  double best_residual = 0.0;
  int best_restart = 0;
  int restarts = 0;
  int iterations_per_restart = 0;  // configured cap
  std::vector<int> iterations;     // actual iterations per restart
  std::uint64_t seed = 0;
  bool converged = false;          // best_residual < kSuccessResidual
  std::vector<TracePoint> residual_trace;
};

struct DescentResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  std::vector<TracePoint> trace;
};

/// Value of f at x; writes the gradient when `grad` is non-null.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;
using Projection = std::function<void(Eigen::VectorXd& x)>;

/// Projected gradient descent with Armijo backtracking. Each line search
/// starts from a Barzilai-Borwein step and halves until
///   f(x+) <= f(x) + armijo * <grad, x+ - x>,
/// so f never increases. Residual is sqrt(f) / scale. Stops when the residual
/// drops below the target, when it improves by less than stagnation_tol
/// (relative) over stagnation_window iterations, when the line search stalls,
/// or after max_iters iterations.
inline DescentResult projected_descent(Eigen::VectorXd x, const Objective& objective, const Projection& project,
                                       double scale, const SearchOptions& opt, int restart_index = 0) {
  const auto residual_of = [scale](double f) { return std::sqrt(std::max(f, 0.0)) / scale; };
  project(x);
  Eigen::VectorXd grad(x.size());
  double f = objective(x, &grad);
  DescentResult out;
  std::vector<double> history{residual_of(f)};
  out.trace.push_back({restart_index, 0, history.back()});

  double step = 1.0;
  Eigen::VectorXd x_new(x.size()), grad_new(x.size());
  int it = 0;
  while (it < opt.max_iters && history.back() >= opt.target_residual) {
    double trial = step;
    double f_new = f;
    bool accepted = false;
    while (trial > 1e-30) {
      x_new = x - trial * grad;
      project(x_new);
      f_new = objective(x_new, nullptr);
      if (std::isfinite(f_new) && f_new <= f + opt.armijo * grad.dot(x_new - x)) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) break;
    ++it;
    objective(x_new, &grad_new);
    const Eigen::VectorXd s = x_new - x;
    const double sy = s.dot(grad_new - grad);
    const double ss = s.squaredNorm();
    step = (sy > 0.0 && ss > 0.0) ? std::clamp(ss / sy, 1e-20, 1e20) : std::min(2.0 * trial, 1e20);
    x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
    history.push_back(residual_of(f));
    if (it % opt.trace_stride == 0) out.trace.push_back({restart_index, it, history.back()});
    if (ss == 0.0) break;
    if (it >= opt.stagnation_window) {
      const double then = history[it - opt.stagnation_window];
      if (then - history.back() <= opt.stagnation_tol * then) break;
    }
  }
  if (out.trace.back().iteration != it) out.trace.push_back({restart_index, it, history.back()});
  out.x = std::move(x);
  out.residual = history.back();
  out.iterations = it;
  return out;
}

/// Runs restart_fn(0..restarts-1), possibly in parallel. Results are indexed
/// by restart, so the outcome does not depend on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_restarts(int restarts, int threads, Fn&& restart_fn) {
  std::vector<Result> results(static_cast<std::size_t>(restarts));
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  workers = std::min(workers, restarts);
  if (workers <= 1) {
    for (int r = 0; r < restarts; ++r) results[r] = restart_fn(r);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int r = next++; r < restarts; r = next++) results[r] = restart_fn(r);
    });
  }
  pool.clear();  // joins
  return results;
}

/// Lowest residual wins; ties go to the lower restart index.
inline SearchReport summarize(const std::vector<DescentResult>& runs, const SearchOptions& opt) {
  SearchReport report;
  report.restarts = static_cast<int>(runs.size());
  report.iterations_per_restart = opt.max_iters;
  report.seed = opt.seed;
  report.best_restart = 0;
  for (int r = 0; r < report.restarts; ++r) {
    report.iterations.push_back(runs[r].iterations);
    report.residual_trace.insert(report.residual_trace.end(), runs[r].trace.begin(), runs[r].trace.end());
    if (runs[r].residual < runs[report.best_restart].residual) report.best_restart = r;
  }
  report.best_residual = runs.empty() ? INFINITY : runs[report.best_restart].residual;
  report.converged = report.best_residual < kSuccessResidual;
  return report;
}

}  // namespace psdcone
