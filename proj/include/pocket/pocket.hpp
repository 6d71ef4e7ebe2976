#pragma once

#include "pocket/group_ops.hpp"
#include "pocket/prune_result.hpp"
#include "pocket/ridge.hpp"

#include <optional>
#include <vector>

namespace pocket {

struct PocketConfig {
  Index m = 1;                           // kernels (groups) to keep
  double k = 1.0;                        // fixed ratio rho3 / rho2
  int iterations = 50;
  /// Stop once ||W - Theta||_F <= tol * ||W||_F.
  std::optional<double> early_stop_tol;
  bool run_stage2 = true;
  std::vector<double> alpha_grid = default_alpha_grid();
};

/// m = round(rate * G) clamped to [1, G-1]; rates outside (0, 1) are rejected.
Index resolve_remain(double rate, Index num_groups);

/// Stage 1: group-sparse fit with one precomputed inverse (k I + X^T X)^{-1}
/// (Woodbury form when N < H). Exactly one factorization is performed.
PruneResult stage1(const Matrix& X, const Matrix& Y, const PocketConfig& cfg, const GroupView& view,
                   const Gram* gram = nullptr);

/// Stage 2: ridge refit on the columns of the selected groups with the
/// penalty chosen by closed-form leave-one-out over `alpha_grid`.
RidgeModel stage2(const Matrix& X, const std::vector<int>& selected_groups, const GroupView& view,
                  const Matrix& Y, const std::vector<double>& alpha_grid = default_alpha_grid(),
                  FactorizationCounter* counter = nullptr);

} // namespace pocket
