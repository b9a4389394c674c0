#pragma once

// JSON and CSV serialization for matrices, configurations, Gram matrices,
// factorizations, realizations and reports.
//
//   matrix:        {"dim": d, "entries": [[[re, im], ...], ...]}   row-major
//   vectors:       {"n": n, "vectors": [[x1, ..., xn], ...]}       n = vector length
//   gram:          {"n": n, "entries": [[...], ...]}
//   realization:   {"n": n, "d": d, "matrices": [matrix, ...]}
//   factorization: {"m": m, "n": n, "b": [[...], ...], "residual": r}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psdcone/configurations.hpp"
#include "psdcone/matrix_core.hpp"
#include "psdcone/orthant_factorization.hpp"
#include "psdcone/psd_realization.hpp"
#include "psdcone/realization.hpp"
#include "psdcone/search.hpp"

namespace psdcone::io {

using json = nlohmann::json;

enum class TraceConvention { normalized, raw };

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& context) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::ParseError, context + ": missing field \"" + name + "\"");
  }
  return j.at(name);
}

inline double number(const json& j, const std::string& context) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, context + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, context + ": non-finite number");
  return x;
}

inline int positive_int(const json& j, const std::string& context) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw Error(ErrorCode::ParseError, context + ": expected a positive integer");
  }
  return j.get<int>();
}

inline RealMatrix real_rows(const json& rows, int expected_rows, int expected_cols, const std::string& context) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != expected_rows) {
    throw Error(ErrorCode::ParseError, context + ": expected " + std::to_string(expected_rows) + " rows");
  }
  RealMatrix out(expected_rows, expected_cols);
  for (int i = 0; i < expected_rows; ++i) {
    const json& row = rows[i];
    const std::string where = context + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != expected_cols) {
      throw Error(ErrorCode::ParseError, where + ": expected " + std::to_string(expected_cols) + " entries");
    }
    for (int k = 0; k < expected_cols; ++k) out(i, k) = number(row[k], where + "[" + std::to_string(k) + "]");
  }
  return out;
}

inline json real_rows_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline json to_json(const HermitianMatrix& a) {
  json rows = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < a.dim(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", a.dim()}, {"entries", std::move(rows)}};
}

inline json complex_matrix_json(const ComplexMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back({a(i, k).real(), a(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", a.rows()}, {"entries", std::move(rows)}};
}

inline HermitianMatrix matrix_from_json(const json& j, const std::string& context = "matrix") {
  const int d = detail::positive_int(detail::field(j, "dim", context), context + ".dim");
  if (d > kMaxMatrixDim) throw Error(ErrorCode::DimensionCap, context + ".dim exceeds cap");
  const json& rows = detail::field(j, "entries", context);
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw Error(ErrorCode::ParseError, context + ".entries: expected " + std::to_string(d) + " rows");
  }
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    const std::string where = context + ".entries[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d) {
      throw Error(ErrorCode::ParseError, where + ": expected " + std::to_string(d) + " entries");
    }
    for (int k = 0; k < d; ++k) {
      const json& z = rows[i][k];
      const std::string at = where + "[" + std::to_string(k) + "]";
      if (!z.is_array() || z.size() != 2) throw Error(ErrorCode::ParseError, at + ": expected [re, im]");
      m(i, k) = Complex(detail::number(z[0], at + "[0]"), detail::number(z[1], at + "[1]"));
    }
  }
  try {
    return HermitianMatrix(m);
  } catch (const Error& e) {
    throw Error(e.code(), context + ": " + e.what());
  }
}

/// With the raw convention, matrices are written scaled by 1/sqrt(d) so that
/// unnormalized Tr(A_j A_k) reproduces the Gram matrix; reading undoes it.
inline json to_json(const Realization& r, TraceConvention conv = TraceConvention::normalized) {
  const double s = conv == TraceConvention::raw ? 1.0 / std::sqrt(static_cast<double>(r.d)) : 1.0;
  json mats = json::array();
  for (const auto& a : r.matrices) mats.push_back(to_json(s == 1.0 ? a : a * s));
  json out = {{"n", r.n()}, {"d", r.d}, {"matrices", std::move(mats)}};
  if (r.gram_residual) out["gram_residual"] = *r.gram_residual;
  if (r.not_cone_guaranteed) out["not_cone_guaranteed"] = true;
  if (conv == TraceConvention::raw) out["trace_convention"] = "raw";
  return out;
}

inline Realization realization_from_json(const json& j, TraceConvention conv = TraceConvention::normalized) {
  const std::string ctx = "realization";
  const int n = detail::positive_int(detail::field(j, "n", ctx), ctx + ".n");
  const int d = detail::positive_int(detail::field(j, "d", ctx), ctx + ".d");
  const json& mats = detail::field(j, "matrices", ctx);
  if (!mats.is_array() || static_cast<int>(mats.size()) != n) {
    throw Error(ErrorCode::ParseError, ctx + ".matrices: expected " + std::to_string(n) + " matrices");
  }
  const double s = conv == TraceConvention::raw ? std::sqrt(static_cast<double>(d)) : 1.0;
  Realization out;
  out.d = d;
  for (int k = 0; k < n; ++k) {
    HermitianMatrix a = matrix_from_json(mats[k], ctx + ".matrices[" + std::to_string(k) + "]");
    if (a.dim() != d) throw Error(ErrorCode::DimMismatch, ctx + ".matrices[" + std::to_string(k) + "]: dim != d");
    out.matrices.push_back(s == 1.0 ? a : a * s);
  }
  if (j.contains("gram_residual")) out.gram_residual = detail::number(j.at("gram_residual"), ctx + ".gram_residual");
  if (j.contains("not_cone_guaranteed")) out.not_cone_guaranteed = j.at("not_cone_guaranteed").get<bool>();
  return out;
}

inline json to_json(const GramMatrix& g) { return {{"n", g.n()}, {"entries", detail::real_rows_json(g.entries())}}; }

/// Accepts a Gram object, or any object with a nested "gram" field (as
/// written by the demo subcommand).
inline GramMatrix gram_from_json(const json& j) {
  const json& src = (j.is_object() && j.contains("gram") && !j.contains("entries")) ? j.at("gram") : j;
  const int n = detail::positive_int(detail::field(src, "n", "gram"), "gram.n");
  const RealMatrix entries = detail::real_rows(detail::field(src, "entries", "gram"), n, n, "gram.entries");
  return GramMatrix(entries);
}

inline json to_json(const VectorConfig& c) {
  json out = {{"n", c.m()}, {"vectors", detail::real_rows_json(c.vectors)}};
  if (!c.label.empty()) out["label"] = c.label;
  return out;
}

inline VectorConfig vectors_from_json(const json& j) {
  const int n = detail::positive_int(detail::field(j, "n", "vectors file"), "n");
  const json& rows = detail::field(j, "vectors", "vectors file");
  if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::ParseError, "vectors: expected a non-empty array");
  VectorConfig out{detail::real_rows(rows, static_cast<int>(rows.size()), n, "vectors"), ""};
  if (j.contains("label") && j.at("label").is_string()) out.label = j.at("label").get<std::string>();
  return out;
}

inline json to_json(const NonnegFactorization& f) {
  return {{"m", f.m()}, {"n", f.n()}, {"b", detail::real_rows_json(f.b)}, {"residual", f.residual}};
}

inline NonnegFactorization factorization_from_json(const json& j) {
  const int m = detail::positive_int(detail::field(j, "m", "factorization"), "m");
  const int n = detail::positive_int(detail::field(j, "n", "factorization"), "n");
  NonnegFactorization f{detail::real_rows(detail::field(j, "b", "factorization"), m, n, "b"), 0.0};
  f.residual = detail::number(detail::field(j, "residual", "factorization"), "residual");
  return f;
}

inline json to_json(const SearchReport& r) {
  return {{"best_residual", r.best_residual}, {"best_restart", r.best_restart},
          {"restarts", r.restarts},           {"iterations_per_restart", r.iterations_per_restart},
          {"iterations", r.iterations},       {"seed", r.seed},
          {"converged", r.converged}};
}

inline json to_json(const VerificationReport& r) {
  return {{"min_eigenvalues", r.min_eigenvalues},
          {"gram_residual", r.gram_residual},
          {"gram_residual_matrix", detail::real_rows_json(r.gram_residual_matrix)},
          {"psd_ok", r.psd_ok},
          {"gram_ok", r.gram_ok},
          {"failing_psd_indices", r.failing_psd_indices},
          {"passed", r.passed()}};
}

inline json to_json(const PentagonDiagnostics& p) {
  return {{"gram_residual", p.gram_residual},
          {"product_norms", p.product_norms},
          {"max_product_norm", p.max_product_norm},
          {"span_residuals", p.span_residuals},
          {"max_span_residual", p.max_span_residual},
          {"collinearity_plus", p.collinearity_plus},
          {"collinearity_minus", p.collinearity_minus},
          {"collinearity_defect", p.collinearity_defect},
          {"max_link", p.max_link},
          {"max_defect", p.max_defect},
          {"first_violated_link", p.first_violated_link}};
}

inline json to_json(const HexagonDiagnostics& h) {
  return {{"gram_residual", h.gram_residual},
          {"midpoint_defect", h.midpoint_defect},
          {"sign_defect", h.sign_defect},
          {"sign_defect_per_vector", h.sign_defect_per_vector},
          {"sum_defect", h.sum_defect},
          {"midpoint_norm", h.midpoint_norm},
          {"max_link", h.max_link},
          {"max_defect", h.max_defect}};
}

inline std::string trace_csv(const SearchReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "restart,iteration,residual\n";
  for (const auto& p : r.residual_trace) out << p.restart << ',' << p.iteration << ',' << p.residual << '\n';
  return out.str();
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

/// Writes via a sibling temporary file and rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline void write_json_file(const std::filesystem::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

}  // namespace psdcone::io
