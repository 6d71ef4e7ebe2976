#include "pocket/preprocess.hpp"

#include "pocket/error.hpp"

#include <cmath>

namespace pocket {

Standardizer Standardizer::restrict(const std::vector<Index>& columns) const {
  Standardizer out;
  out.centers.resize(static_cast<Index>(columns.size()));
  out.scales.resize(static_cast<Index>(columns.size()));
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const Index c = columns[i];
    if (c < 0 || c >= width()) throw DimensionError("Standardizer::restrict: column out of range");
    out.centers(static_cast<Index>(i)) = centers(c);
    out.scales(static_cast<Index>(i)) = scales(c);
  }
  return out;
}

std::pair<Matrix, Standardizer> standardize_fit(const Matrix& X) {
  if (X.rows() < 2) throw ConfigError("standardize_fit: need at least two samples");
  Standardizer s;
  s.centers = X.colwise().mean().transpose();
  Matrix Z = X.rowwise() - s.centers.transpose();
  s.scales.resize(X.cols());
  for (Index j = 0; j < X.cols(); ++j) {
    const double norm = Z.col(j).norm();
    s.scales(j) = norm < 1e-12 ? 1.0 : norm;
    if (norm < 1e-12)
      Z.col(j).setZero();
    else
      Z.col(j) /= norm;
  }
  return {std::move(Z), std::move(s)};
}

Matrix standardize_apply(const Matrix& X, const Standardizer& s) {
  if (X.cols() != s.width())
    throw DimensionError("standardize_apply: matrix has " + std::to_string(X.cols()) +
                         " columns, standardizer expects " + std::to_string(s.width()));
  Matrix Z = X.rowwise() - s.centers.transpose();
  Z.array().rowwise() /= s.scales.transpose().array();
  return Z;
}

LabelEncoding encode_labels(const std::vector<int>& labels, int num_classes) {
  if (num_classes < 1) throw ConfigError("encode_labels: need at least one class");
  const auto n = static_cast<Index>(labels.size());
  LabelEncoding enc;
  enc.Y = Matrix::Constant(n, num_classes, -1.0);
  for (Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    if (c < 0 || c >= num_classes)
      throw ConfigError("encode_labels: label " + std::to_string(c) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    enc.Y(i, c) = 1.0;
  }
  enc.column_means = n > 0 ? Vector(enc.Y.colwise().mean().transpose()) : Vector::Zero(num_classes);
  for (Index c = 0; c < num_classes; ++c)
    if (std::abs(std::abs(enc.column_means(c)) - 1.0) < 1e-12) enc.degenerate = true;
  enc.Y.rowwise() -= enc.column_means.transpose();
  return enc;
}

} // namespace pocket
