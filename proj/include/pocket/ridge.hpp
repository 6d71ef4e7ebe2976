#pragma once

#include "pocket/linalg.hpp"

#include <optional>
#include <vector>

namespace pocket {

/// Ridge classifier restricted to `kept_columns` of the standardized feature
/// matrix (all columns when empty).
struct RidgeModel {
  Matrix W;                           // |kept_columns| x C
  double alpha = 1.0;
  std::vector<Index> kept_columns;
};

/// 10 log-spaced alphas on [1e-3, 1e3].
std::vector<double> default_alpha_grid();

/// W = (rho1 I + X^T X)^{-1} X^T Y, solved in the dual (N x N) form when
/// N < H. rho1 = 0 is accepted only for full-column-rank primal problems.
Matrix fit_ridge(const Matrix& X, const Matrix& Y, double rho1,
                 FactorizationCounter* counter = nullptr);
Matrix fit_ridge_primal(const Matrix& X, const Matrix& Y, double rho1);
Matrix fit_ridge_dual(const Matrix& X, const Matrix& Y, double rho1);

struct LooSelection {
  double best_alpha = 0.0;
  std::vector<double> alphas;
  std::vector<double> mse;            // mean squared LOO residual per alpha
};

/// Closed-form leave-one-out residuals e_n / (1 - h_n) for every alpha from a
/// single eigendecomposition; returns the minimiser, ties to the larger alpha.
LooSelection loocv_select_alpha(const Matrix& X, const Matrix& Y,
                                const std::vector<double>& grid = default_alpha_grid());

/// Per-sample LOO residuals (N x C) for one alpha, closed form.
Matrix loo_residuals(const Matrix& X, const Matrix& Y, double alpha);

/// Row-wise argmax of the scores, ties to the smallest class index.
std::vector<int> argmax_rows(const Matrix& scores);

/// Predicts from standardized features; applies kept_columns when set.
std::vector<int> predict(const Matrix& X, const RidgeModel& model);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

} // namespace pocket

namespace pocket {

/// Index of the smallest value; values within 1e-12 relative of the minimum
/// count as ties and resolve to the largest alpha among them.
std::size_t pick_alpha_index(const std::vector<double>& alphas, const std::vector<double>& mse);

} // namespace pocket
