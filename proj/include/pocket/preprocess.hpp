#pragma once

#include "pocket/linalg.hpp"

#include <utility>
#include <vector>

namespace pocket {

/// Per-column centre and scale learned on training features.
struct Standardizer {
  Vector centers;
  Vector scales;

  Index width() const { return centers.size(); }
  /// Statistics of the listed columns only, in the listed order.
  Standardizer restrict(const std::vector<Index>& columns) const;
};

/// Centres each column and scales it to unit Euclidean norm. Columns whose
/// centred norm is below 1e-12 keep scale 1 and become all zero.
std::pair<Matrix, Standardizer> standardize_fit(const Matrix& X);
Matrix standardize_apply(const Matrix& X, const Standardizer& s);

/// +-1 class indicator matrix with every column centred.
struct LabelEncoding {
  Matrix Y;
  Vector column_means;
  /// True when some column of the raw indicator matrix is constant (a class
  /// absent or universal), which leaves an all-zero centred column.
  bool degenerate = false;
};

LabelEncoding encode_labels(const std::vector<int>& labels, int num_classes);

} // namespace pocket
