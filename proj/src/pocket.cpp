#include "pocket/pocket.hpp"

#include "detail/dual_step.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace pocket {

Index resolve_remain(double rate, Index num_groups) {
  if (num_groups < 2) throw ConfigError("resolve_remain: need at least two groups");
  if (!(rate > 0.0 && rate < 1.0))
    throw ConfigError("remain rate must lie strictly between 0 and 1 (got " + std::to_string(rate) + ")");
  const auto m = static_cast<Index>(std::llround(rate * static_cast<double>(num_groups)));
  return std::clamp<Index>(m, 1, num_groups - 1);
}

PruneResult stage1(const Matrix& X, const Matrix& Y, const PocketConfig& cfg, const GroupView& view,
                   const Gram* gram) {
  detail::check_problem(X, Y, view, cfg.m, cfg.iterations, "stage1");
  if (!(cfg.k > 0.0)) throw ConfigError("stage1: k must be positive");

  std::optional<Gram> own;
  if (!gram) gram = &own.emplace(X);

  FactorizationCounter counter;
  const ShiftedGramInverse inv(X, *gram, cfg.k, &counter);
  const Matrix XtY = X.transpose() * Y;
  Matrix Theta = Matrix::Zero(X.cols(), Y.cols());
  Matrix U = Matrix::Zero(X.cols(), Y.cols());
  Matrix W;
  PruneResult r;
  for (int t = 1; t <= cfg.iterations; ++t) {
    W = inv.apply(cfg.k * (Theta + U) + XtY);
    const double threshold = detail::theta_u_step(W, Theta, U, view, cfg.m, t, r.trace);
    r.iterations = t;
    if (threshold == 0.0) break;
    if (cfg.early_stop_tol && r.trace.back().norm_gap <= *cfg.early_stop_tol * W.norm()) break;
  }
  r.factorizations = counter.count;
  detail::finish(r, W, std::move(Theta), std::move(U), view, cfg.m);
  if (r.trace.back().threshold == 0.0) r.degenerate = true;
  return r;
}

RidgeModel stage2(const Matrix& X, const std::vector<int>& selected_groups, const GroupView& view,
                  const Matrix& Y, const std::vector<double>& alpha_grid, FactorizationCounter* counter) {
  if (selected_groups.empty()) throw ConfigError("stage2: empty selection");
  if (X.cols() != view.num_rows()) throw DimensionError("stage2: group view does not match X");
  RidgeModel model;
  model.kept_columns = view.rows_of(selected_groups);
  const Matrix Xh = select_cols(X, model.kept_columns);
  model.alpha = loocv_select_alpha(Xh, Y, alpha_grid).best_alpha;
  model.W = fit_ridge(Xh, Y, model.alpha, counter);
  return model;
}

} // namespace pocket
