#pragma once

#include "pocket/error.hpp"
#include "pocket/group_ops.hpp"
#include "pocket/prune_result.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pocket::detail {

// Theta- and U-updates shared by the ADMM baseline and POCKET stage 1.
// Returns the threshold used (1 / rho3).
inline double theta_u_step(const Matrix& W, Matrix& Theta, Matrix& U, const GroupView& view,
                           Index m, int iter, std::vector<TraceEntry>& trace,
                           const double* fixed_threshold = nullptr) {
  if (!W.allFinite())
    throw NumericalError("non-finite W at iteration " + std::to_string(iter) +
                         " (check the penalty scaling)");
  const Matrix Wtilde = W - U;
  const Vector norms = group_norms(Wtilde, view);
  const auto dyn = dynamic_threshold(norms, m);
  const double threshold = fixed_threshold ? *fixed_threshold : dyn.value;
  Theta = group_soft_threshold(Wtilde, threshold, view);
  U += Theta - W;

  TraceEntry e;
  e.iter = iter;
  e.norm_gap = (W - Theta).norm();
  e.threshold = threshold;
  const double top = norms(dyn.order.front());
  e.relative_threshold = dyn.value > 0.0 ? top / dyn.value : std::numeric_limits<double>::infinity();
  e.reciprocal_relative_threshold = top > 0.0 ? dyn.value / top : 0.0;
  trace.push_back(e);
  return threshold;
}

inline void finish(PruneResult& r, const Matrix& W, Matrix Theta, Matrix U, const GroupView& view,
                   Index m) {
  r.selected_groups = nonzero_groups(Theta, view);
  r.kept_columns = view.rows_of(r.selected_groups);
  r.W_pruned = select_rows(W, r.kept_columns);
  r.degenerate = static_cast<Index>(r.selected_groups.size()) < m;
  r.W = W;
  r.Theta = std::move(Theta);
  r.U = std::move(U);
}

inline void check_problem(const Matrix& X, const Matrix& Y, const GroupView& view, Index m,
                          int iterations, const char* who) {
  if (X.rows() != Y.rows()) throw DimensionError(std::string(who) + ": X and Y row counts differ");
  if (X.cols() != view.num_rows())
    throw DimensionError(std::string(who) + ": group view does not match feature width");
  if (m < 1 || m >= view.size())
    throw ConfigError(std::string(who) + ": need 1 <= m < G (m = " + std::to_string(m) +
                      ", G = " + std::to_string(view.size()) + ")");
  if (iterations < 1) throw ConfigError(std::string(who) + ": iterations must be >= 1");
  if (!X.allFinite() || !Y.allFinite()) throw NumericalError(std::string(who) + ": non-finite input");
}

} // namespace pocket::detail
