#include "pocket/admm.hpp"

#include "detail/dual_step.hpp"

#include <optional>

namespace pocket {

PruneResult admm_prune(const Matrix& X, const Matrix& Y, const GroupView& view,
                       const AdmmConfig& cfg, const Gram* gram) {
  detail::check_problem(X, Y, view, cfg.m, cfg.iterations, "admm_prune");
  if (!(cfg.rho1 > 0.0) || !(cfg.rho2 > 0.0))
    throw ConfigError("admm_prune: rho1 and rho2 must be positive");
  if (cfg.fixed_rho3 && !(*cfg.fixed_rho3 > 0.0))
    throw ConfigError("admm_prune: fixed rho3 must be positive");

  std::optional<Gram> own;
  if (!gram) gram = &own.emplace(X);

  FactorizationCounter counter;
  const Matrix XtY = X.transpose() * Y;
  Matrix Theta = Matrix::Zero(X.cols(), Y.cols());
  Matrix U = Matrix::Zero(X.cols(), Y.cols());
  Matrix W;
  PruneResult r;

  const std::optional<double> fixed_threshold =
      cfg.fixed_rho3 ? std::optional<double>(1.0 / *cfg.fixed_rho3) : std::nullopt;
  double rho3 = cfg.fixed_rho3.value_or(0.0);
  for (int t = 1; t <= cfg.iterations; ++t) {
    // [(rho1 + rho3) I + rho2 X^T X] W = rho3 (Theta + U) + rho2 X^T Y, divided through by rho2.
    const ShiftedGramInverse inv(X, *gram, (cfg.rho1 + rho3) / cfg.rho2, &counter);
    W = inv.apply((rho3 / cfg.rho2) * (Theta + U) + XtY);
    const double threshold = detail::theta_u_step(W, Theta, U, view, cfg.m, t, r.trace,
                                                  fixed_threshold ? &*fixed_threshold : nullptr);
    r.iterations = t;
    if (threshold == 0.0) break;  // reported through the degenerate flag
    if (!fixed_threshold) rho3 = 1.0 / threshold;
  }
  r.factorizations = counter.count;
  detail::finish(r, W, std::move(Theta), std::move(U), view, cfg.m);
  if (r.trace.back().threshold == 0.0) r.degenerate = true;
  return r;
}

} // namespace pocket
