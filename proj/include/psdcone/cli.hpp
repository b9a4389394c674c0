#pragma once

// The psdcone command-line tool. Exit codes: 0 success, 1 parse or
// validation error, 2 search or verification did not reach its threshold.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psdcone/clifford_embedding.hpp"
#include "psdcone/configurations.hpp"
#include "psdcone/exterior_algebra.hpp"
#include "psdcone/json_io.hpp"
#include "psdcone/orthant_factorization.hpp"
#include "psdcone/psd_realization.hpp"

namespace psdcone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitThreshold = 2;

enum class Subcommand { demo, gram, embed, factorize, realize, verify, diagnose };

struct RunConfig {
  Subcommand subcommand = Subcommand::demo;
  std::string target;  // demo: pentagon|hexagon; diagnose: pentagon|hexagon
  std::string input, gram, realization, factorization, output, gram_output;
  std::optional<std::string> trace_path;
  std::uint64_t seed = 0;
  int restarts = 20;
  int max_iters = 20000;
  int threads = 0;
  int inner_dim = 0;  // 0: n(n+1)/2
  int dim = 0;
  int ladder = 0;
  int rank = 0;       // 0: full rank
  double tol_psd = 1e-9;
  double tol_gram = 1e-6;
  bool dump_operators = false;
  io::TraceConvention trace_convention = io::TraceConvention::normalized;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

inline SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions opt;
  opt.restarts = cfg.restarts;
  opt.max_iters = cfg.max_iters;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  return opt;
}

inline void maybe_write_trace(const RunConfig& cfg, const SearchReport& report) {
  if (cfg.trace_path) io::write_file_atomic(*cfg.trace_path, io::trace_csv(report));
}

inline int run_demo(const RunConfig& cfg, std::ostream& out) {
  VectorConfig config;
  if (cfg.target == "pentagon") {
    config = pentagon();
  } else if (cfg.target == "hexagon") {
    config = hexagon();
  } else {
    throw Error(ErrorCode::InvalidArgument, "demo target must be pentagon or hexagon, got \"" + cfg.target + "\"");
  }
  const GramMatrix g = gram(config);
  io::json j = io::to_json(config);
  j["gram"] = io::to_json(g);
  if (!cfg.output.empty()) io::write_json_file(cfg.output, j);
  if (!cfg.gram_output.empty()) io::write_json_file(cfg.gram_output, io::to_json(g));
  out << "demo " << cfg.target << ": " << config.n() << " vectors in R^" << config.m()
      << ", min Gram entry " << sci(g.entries().minCoeff()) << " PASS\n";
  return kExitOk;
}

inline int run_gram(const RunConfig& cfg, std::ostream& out) {
  const VectorConfig config = io::vectors_from_json(io::read_json_file(cfg.input));
  const GramMatrix g = gram(config);
  io::write_json_file(cfg.output, io::to_json(g));
  out << "gram: n=" << g.n() << " PASS\n";
  return kExitOk;
}

inline int run_embed(const RunConfig& cfg, std::ostream& out) {
  const VectorConfig config = io::vectors_from_json(io::read_json_file(cfg.input));
  const Realization real = embed_config(config.as_lists());
  io::json j = io::to_json(real, cfg.trace_convention);
  if (cfg.dump_operators) {
    const int k = config.m() / 2;
    io::json ops = io::json::array();
    for (int i = 0; i < k; ++i) {
      std::vector<double> e(k, 0.0);
      e[i] = 1.0;
      ops.push_back({{"kind", "creation"}, {"index", i}, {"matrix", io::complex_matrix_json(creation(k, e))}});
    }
    j["operators"] = std::move(ops);
  }
  io::write_json_file(cfg.output, j);
  double lambda_min = INFINITY;
  for (const auto& a : real.matrices) lambda_min = std::min(lambda_min, min_eigenvalue(a));
  out << "embed: n=" << real.n() << " d=" << real.d << " min eigenvalue " << sci(lambda_min)
      << (real.not_cone_guaranteed ? " WARN not_cone_guaranteed" : " PASS") << "\n";
  return kExitOk;
}

inline int run_factorize(const RunConfig& cfg, std::ostream& out) {
  const GramMatrix g = io::gram_from_json(io::read_json_file(cfg.gram));
  const int m = cfg.inner_dim > 0 ? cfg.inner_dim : default_inner_dim(g.n());
  const auto [f, report] = factorize_nonneg(g, m, search_options(cfg));
  io::json j = io::to_json(f);
  j["report"] = io::to_json(report);
  io::write_json_file(cfg.output, j);
  maybe_write_trace(cfg, report);
  if (report.converged) {
    out << "factorize: m=" << m << " residual " << sci(report.best_residual) << " PASS\n";
    return kExitOk;
  }
  out << "factorize: m=" << m << " no factorization found; best residual = " << sci(report.best_residual)
      << " FAIL\n";
  return kExitThreshold;
}

inline int run_realize(const RunConfig& cfg, std::ostream& out) {
  const GramMatrix g = io::gram_from_json(io::read_json_file(cfg.gram));
  if ((cfg.dim > 0) == (cfg.ladder > 0)) throw Error(ErrorCode::InvalidArgument, "give exactly one of --dim, --ladder");
  const SearchOptions opt = search_options(cfg);
  RealizeResult result;
  io::json ladder_json = io::json::array();
  if (cfg.ladder > 0) {
    LadderResult lad = realize_ladder(g, cfg.ladder, opt, cfg.rank);
    for (const auto& s : lad.steps) ladder_json.push_back({{"d", s.d}, {"best_residual", s.best_residual}});
    result = std::move(lad.result);
  } else {
    const int r = cfg.rank > 0 ? cfg.rank : cfg.dim;
    result = realize(g, cfg.dim, r, opt);
  }
  io::json j = io::to_json(result.realization, cfg.trace_convention);
  j["report"] = io::to_json(result.report);
  if (cfg.ladder > 0) j["ladder"] = std::move(ladder_json);
  io::write_json_file(cfg.output, j);
  maybe_write_trace(cfg, result.report);
  if (result.report.converged) {
    out << "realize: d=" << result.realization.d << " residual " << sci(result.report.best_residual) << " PASS\n";
    return kExitOk;
  }
  out << "realize: d=" << result.realization.d << " no realization found; best residual = "
      << sci(result.report.best_residual) << " FAIL\n";
  return kExitThreshold;
}

inline int run_verify(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.tol_psd > 0.0) || !(cfg.tol_gram > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
  const GramMatrix g = io::gram_from_json(io::read_json_file(cfg.gram));
  const Realization real = io::realization_from_json(io::read_json_file(cfg.realization), cfg.trace_convention);
  const VerificationReport report = verify_realization(g, real, cfg.tol_psd, cfg.tol_gram);
  if (!cfg.output.empty()) io::write_json_file(cfg.output, io::to_json(report));
  double lambda_min = INFINITY;
  for (double l : report.min_eigenvalues) lambda_min = std::min(lambda_min, l);
  out << "verify: gram residual " << sci(report.gram_residual) << ", min eigenvalue " << sci(lambda_min)
      << (report.passed() ? " PASS" : " FAIL");
  if (!report.psd_ok) out << " (first non-PSD matrix " << report.failing_psd_indices.front() << ")";
  out << "\n";
  return report.passed() ? kExitOk : kExitThreshold;
}

inline int run_diagnose(const RunConfig& cfg, std::ostream& out) {
  if (cfg.target == "pentagon") {
    const Realization real = io::realization_from_json(io::read_json_file(cfg.realization), cfg.trace_convention);
    const PentagonDiagnostics diag = pentagon_psd_diagnostics(real);
    if (!cfg.output.empty()) io::write_json_file(cfg.output, io::to_json(diag));
    out << "diagnose pentagon: gram residual " << sci(diag.gram_residual) << ", max defect " << sci(diag.max_defect)
        << " (" << diag.max_link << ")\n";
    return kExitOk;
  }
  if (cfg.target == "hexagon") {
    const NonnegFactorization f = io::factorization_from_json(io::read_json_file(cfg.factorization));
    const HexagonDiagnostics diag = hexagon_orthant_diagnostics(f.b);
    if (!cfg.output.empty()) io::write_json_file(cfg.output, io::to_json(diag));
    out << "diagnose hexagon: gram residual " << sci(diag.gram_residual) << ", max defect " << sci(diag.max_defect)
        << " (" << diag.max_link << ")\n";
    return kExitOk;
  }
  throw Error(ErrorCode::InvalidArgument, "diagnose target must be pentagon or hexagon, got \"" + cfg.target + "\"");
}

}  // namespace detail

/// Executes a parsed configuration. Library errors map to exit code 1.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::demo: return detail::run_demo(cfg, out);
      case Subcommand::gram: return detail::run_gram(cfg, out);
      case Subcommand::embed: return detail::run_embed(cfg, out);
      case Subcommand::factorize: return detail::run_factorize(cfg, out);
      case Subcommand::realize: return detail::run_realize(cfg, out);
      case Subcommand::verify: return detail::run_verify(cfg, out);
      case Subcommand::diagnose: return detail::run_diagnose(cfg, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

/// Parses argv and runs. `--help` prints usage and returns 0.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Realize vector configurations as positive semidefinite matrices under (1/d) Tr"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::string convention = "normalized";
  app.add_option("--trace-convention", convention,
                 "raw: matrices are read/written scaled by sqrt(d) so that Tr(A_j A_k) matches the Gram matrix")
      ->check(CLI::IsMember({"normalized", "raw"}));
  app.add_option("--threads", cfg.threads, "worker threads for restarts (0: all cores)")->check(CLI::NonNegativeNumber);

  const auto add_search = [&cfg](CLI::App* sub) {
    sub->add_option("--restarts", cfg.restarts, "independent random restarts")->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.max_iters, "iteration cap per restart")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "base seed");
    sub->add_option("--trace", cfg.trace_path, "write restart,iteration,residual CSV");
  };

  auto* demo = app.add_subcommand("demo", "write a built-in configuration and its Gram matrix");
  demo->add_option("config", cfg.target, "pentagon or hexagon")->required()->check(CLI::IsMember({"pentagon", "hexagon"}));
  demo->add_option("--output", cfg.output, "configuration JSON (vectors plus nested gram)");
  demo->add_option("--gram-output", cfg.gram_output, "Gram JSON alone");

  auto* gram_cmd = app.add_subcommand("gram", "compute the Gram matrix of a vectors file");
  gram_cmd->add_option("--input", cfg.input, "vectors JSON")->required();
  gram_cmd->add_option("--output", cfg.output, "Gram JSON")->required();

  auto* embed_cmd = app.add_subcommand("embed", "Clifford embedding of each vector");
  embed_cmd->add_option("--input", cfg.input, "vectors JSON")->required();
  embed_cmd->add_option("--output", cfg.output, "realization JSON")->required();
  embed_cmd->add_flag("--dump-operators", cfg.dump_operators, "include creation operators for the basis vectors");

  auto* factorize_cmd = app.add_subcommand("factorize", "search for a nonnegative factorization G = B^T B");
  factorize_cmd->add_option("--gram", cfg.gram, "Gram JSON")->required();
  factorize_cmd->add_option("--inner-dim", cfg.inner_dim, "rows m of B (default n(n+1)/2)")->check(CLI::PositiveNumber);
  factorize_cmd->add_option("--output", cfg.output, "factorization JSON")->required();
  add_search(factorize_cmd);

  auto* realize_cmd = app.add_subcommand("realize", "search for PSD matrices reproducing a Gram matrix");
  realize_cmd->add_option("--gram", cfg.gram, "Gram JSON")->required();
  auto* dim_opt = realize_cmd->add_option("--dim", cfg.dim, "matrix dimension d")->check(CLI::PositiveNumber);
  auto* ladder_opt =
      realize_cmd->add_option("--ladder", cfg.ladder, "try d = 1, 2, 4, ... up to this value")->check(CLI::PositiveNumber);
  dim_opt->excludes(ladder_opt);
  realize_cmd->add_option("--rank", cfg.rank, "factor rank r (default d)")->check(CLI::PositiveNumber);
  realize_cmd->add_option("--output", cfg.output, "realization JSON")->required();
  add_search(realize_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "check a realization against a Gram matrix");
  verify_cmd->add_option("--gram", cfg.gram, "Gram JSON")->required();
  verify_cmd->add_option("--realization", cfg.realization, "realization JSON")->required();
  verify_cmd->add_option("--tol-psd", cfg.tol_psd, "allowed negative eigenvalue magnitude")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--tol-gram", cfg.tol_gram, "allowed relative Gram residual")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--output", cfg.output, "report JSON");

  auto* diagnose_cmd = app.add_subcommand("diagnose", "contradiction-chain diagnostics for pentagon or hexagon candidates");
  diagnose_cmd->add_option("config", cfg.target, "pentagon or hexagon")
      ->required()
      ->check(CLI::IsMember({"pentagon", "hexagon"}));
  diagnose_cmd->add_option("--realization", cfg.realization, "realization JSON (pentagon)");
  diagnose_cmd->add_option("--factorization", cfg.factorization, "factorization JSON (hexagon)");
  diagnose_cmd->add_option("--output", cfg.output, "report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  cfg.trace_convention = convention == "raw" ? io::TraceConvention::raw : io::TraceConvention::normalized;
  if (*demo) cfg.subcommand = Subcommand::demo;
  if (*gram_cmd) cfg.subcommand = Subcommand::gram;
  if (*embed_cmd) cfg.subcommand = Subcommand::embed;
  if (*factorize_cmd) cfg.subcommand = Subcommand::factorize;
  if (*realize_cmd) cfg.subcommand = Subcommand::realize;
  if (*verify_cmd) cfg.subcommand = Subcommand::verify;
  if (*diagnose_cmd) {
    cfg.subcommand = Subcommand::diagnose;
    if (cfg.target == "pentagon" && cfg.realization.empty()) {
      err << "error: diagnose pentagon requires --realization\n";
      return kExitError;
    }
    if (cfg.target == "hexagon" && cfg.factorization.empty()) {
      err << "error: diagnose hexagon requires --factorization\n";
      return kExitError;
    }
  }
  return run(cfg, out, err);
}

}  // namespace psdcone::cli
