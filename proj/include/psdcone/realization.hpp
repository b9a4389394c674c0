#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "psdcone/matrix_core.hpp"

namespace psdcone {

/// n PSD matrices of common dimension d meant to reproduce a Gram matrix
/// under (1/d) Tr.
struct Realization {
  int d = 0;
  std::vector<HermitianMatrix> matrices;
  std::optional<double> gram_residual;  // relative Frobenius vs the target, when one is attached
  bool not_cone_guaranteed = false;     // set by embed_config for inputs outside the cone

  int n() const noexcept { return static_cast<int>(matrices.size()); }

  /// Pairwise (1/d) Tr(A_j A_k).
  RealMatrix gram() const {
    RealMatrix g(n(), n());
    for (int j = 0; j < n(); ++j) {
      for (int k = j; k < n(); ++k) g(j, k) = g(k, j) = trace_inner_product(matrices[j], matrices[k]);
    }
    return g;
  }

  void check_consistent() const {
    for (const auto& m : matrices) {
      if (m.dim() != d) {
        throw Error(ErrorCode::DimMismatch,
                    "realization matrix of dim " + std::to_string(m.dim()) + " in dimension-" + std::to_string(d) +
                        " realization");
      }
    }
  }
};

/// ||P - G||_F / ||G||_F, falling back to the absolute norm when G = 0.
inline double relative_residual(const RealMatrix& produced, const RealMatrix& target) {
  const double denom = target.norm();
  const double diff = (produced - target).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace psdcone
