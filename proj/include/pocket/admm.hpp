#pragma once

#include "pocket/group_ops.hpp"
#include "pocket/prune_result.hpp"

#include <optional>

namespace pocket {

struct AdmmConfig {
  Index m = 1;        // groups to keep, 1 <= m < G
  double rho1 = 1.0;  // l2 penalty on W
  double rho2 = 1.0;  // weight of the data-fit term
  int iterations = 50;
  /// Replaces the dynamic threshold by the fixed threshold 1/rho3. Used to
  /// check the scaled-dual iteration against the multiplier form.
  std::optional<double> fixed_rho3;
};

/// Group elastic net via ADMM with the dynamic threshold. Every iteration
/// refactorizes [(rho1 + rho3) I + rho2 X^T X] because rho3 changes; the
/// first W-update runs with rho3 = 0 (Theta = U = 0, so it is the ridge
/// solution (rho1 I + rho2 X^T X)^{-1} rho2 X^T Y) and seeds rho3 from its
/// threshold. Pass `gram` to reuse X X^T (or X^T X) across solves on one X.
PruneResult admm_prune(const Matrix& X, const Matrix& Y, const GroupView& view,
                       const AdmmConfig& cfg, const Gram* gram = nullptr);

} // namespace pocket
