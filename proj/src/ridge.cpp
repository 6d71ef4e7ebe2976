#include "pocket/ridge.hpp"

#include "pocket/error.hpp"

#include <algorithm>
#include <cmath>

namespace pocket {

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i < 10; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 9.0));
  return grid;
}

Matrix fit_ridge_primal(const Matrix& X, const Matrix& Y, double rho1) {
  Matrix A = X.transpose() * X;
  A.diagonal().array() += rho1;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("fit_ridge: singular normal equations");
  return llt.solve(X.transpose() * Y);
}

Matrix fit_ridge_dual(const Matrix& X, const Matrix& Y, double rho1) {
  if (!(rho1 > 0.0)) throw NumericalError("fit_ridge: dual form needs rho1 > 0");
  Matrix K = X * X.transpose();
  K.diagonal().array() += rho1;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) throw NumericalError("fit_ridge: singular kernel system");
  return X.transpose() * llt.solve(Y);
}

Matrix fit_ridge(const Matrix& X, const Matrix& Y, double rho1, FactorizationCounter* counter) {
  if (X.rows() != Y.rows()) throw DimensionError("fit_ridge: X and Y row counts differ");
  if (!all_finite(X) || !all_finite(Y)) throw NumericalError("fit_ridge: non-finite input");
  if (!(rho1 >= 0.0) || !std::isfinite(rho1)) throw ConfigError("fit_ridge: rho1 must be >= 0");
  if (rho1 == 0.0 && X.rows() < X.cols())
    throw NumericalError("fit_ridge: rho1 = 0 with fewer samples than features is singular");
  if (counter) counter->bump();
  if (X.rows() < X.cols()) return fit_ridge_dual(X, Y, rho1);
  return fit_ridge_primal(X, Y, rho1);
}

namespace {

// Spectral factors such that the hat matrix for any alpha is
// Z diag(1 / (eig + alpha)) Z^T.
struct HatSpectrum {
  Matrix Z;
  Vector eig;
};

HatSpectrum hat_spectrum(const Matrix& X) {
  HatSpectrum hs;
  if (X.rows() <= X.cols()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(X * X.transpose());
    hs.eig = es.eigenvalues().cwiseMax(0.0);
    hs.Z = es.eigenvectors() * hs.eig.cwiseSqrt().asDiagonal();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(X.transpose() * X);
    hs.eig = es.eigenvalues().cwiseMax(0.0);
    hs.Z = X * es.eigenvectors();
  }
  return hs;
}

Matrix loo_from_spectrum(const HatSpectrum& hs, const Matrix& ZtY, const Matrix& Y, double alpha) {
  const Vector inv = (hs.eig.array() + alpha).inverse().matrix();
  const Matrix fitted = hs.Z * (inv.asDiagonal() * ZtY);
  const Vector h = (hs.Z.array().square().matrix() * inv);
  Matrix res = Y - fitted;
  for (Index n = 0; n < res.rows(); ++n) res.row(n) /= (1.0 - h(n));
  return res;
}

} // namespace

std::size_t pick_alpha_index(const std::vector<double>& alphas, const std::vector<double>& mse) {
  if (alphas.empty() || alphas.size() != mse.size())
    throw ConfigError("pick_alpha_index: empty or mismatched grid");
  const double best = *std::min_element(mse.begin(), mse.end());
  const double tol = 1e-12 * std::max(std::abs(best), 1e-300);
  std::size_t pick = alphas.size();
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (mse[i] - best <= tol && (pick == alphas.size() || alphas[i] > alphas[pick])) pick = i;
  return pick;
}

Matrix loo_residuals(const Matrix& X, const Matrix& Y, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("loo_residuals: alpha must be positive");
  const auto hs = hat_spectrum(X);
  return loo_from_spectrum(hs, hs.Z.transpose() * Y, Y, alpha);
}

LooSelection loocv_select_alpha(const Matrix& X, const Matrix& Y, const std::vector<double>& grid) {
  if (X.rows() < 2) throw ConfigError("loocv_select_alpha: need at least two samples");
  if (X.rows() != Y.rows()) throw DimensionError("loocv_select_alpha: X and Y row counts differ");
  if (grid.empty()) throw ConfigError("loocv_select_alpha: empty alpha grid");
  for (double a : grid)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("loocv_select_alpha: alphas must be positive");

  const auto hs = hat_spectrum(X);
  const Matrix ZtY = hs.Z.transpose() * Y;
  LooSelection sel;
  sel.alphas = grid;
  for (double a : grid) {
    const Matrix res = loo_from_spectrum(hs, ZtY, Y, a);
    sel.mse.push_back(res.squaredNorm() / static_cast<double>(res.size()));
  }
  sel.best_alpha = grid[pick_alpha_index(grid, sel.mse)];
  return sel;
}

std::vector<int> argmax_rows(const Matrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Index n = 0; n < scores.rows(); ++n) {
    Index best = 0;
    for (Index c = 1; c < scores.cols(); ++c)
      if (scores(n, c) > scores(n, best)) best = c;
    out[static_cast<std::size_t>(n)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict(const Matrix& X, const RidgeModel& model) {
  if (model.kept_columns.empty()) {
    if (X.cols() != model.W.rows()) throw DimensionError("predict: feature width does not match model");
    return argmax_rows(X * model.W);
  }
  if (static_cast<Index>(model.kept_columns.size()) != model.W.rows())
    throw DimensionError("predict: kept_columns and W disagree");
  for (Index c : model.kept_columns)
    if (c < 0 || c >= X.cols()) throw DimensionError("predict: kept column outside feature matrix");
  return argmax_rows(select_cols(X, model.kept_columns) * model.W);
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty())
    throw DimensionError("accuracy: size mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

} // namespace pocket
