#pragma once

#include "pocket/linalg.hpp"

#include <vector>

namespace pocket {

/// Row groups of an H x C weight matrix: group g collects the weight rows of
/// every feature produced by kernel g, so its vector is the concatenation of
/// those rows (length 2C for PPV+MAX kernels, C otherwise).
class GroupView {
public:
  GroupView() = default;
  /// Validates that `groups` partitions {0, .., num_rows - 1}.
  GroupView(std::vector<std::vector<Index>> groups, Index num_rows);

  /// `num_groups` consecutive blocks of `width` rows.
  static GroupView contiguous(Index num_groups, Index width);

  Index size() const { return static_cast<Index>(groups_.size()); }
  Index num_rows() const { return num_rows_; }
  const std::vector<Index>& rows(Index g) const { return groups_[static_cast<std::size_t>(g)]; }
  const std::vector<std::vector<Index>>& groups() const { return groups_; }

  /// Rows owned by the listed groups, in the listed order.
  std::vector<Index> rows_of(const std::vector<int>& group_ids) const;

private:
  std::vector<std::vector<Index>> groups_;
  Index num_rows_ = 0;
};

/// Euclidean norm of each group's concatenated rows.
Vector group_norms(const Matrix& M, const GroupView& view);

struct DynamicThreshold {
  double value = 0.0;           // (m+1)-th largest norm
  std::vector<Index> order;     // groups by decreasing norm, ties by index
};

/// Threshold that lets at most m groups survive soft-thresholding.
DynamicThreshold dynamic_threshold(const Vector& norms, Index m);

/// Group-wise shrinkage g -> g * max(1 - threshold / ||g||, 0), with zero
/// groups mapping to zero.
Matrix group_soft_threshold(const Matrix& Wtilde, double threshold, const GroupView& view);

/// Largest group norm over the (m+1)-th largest; +inf when the latter is 0.
double relative_threshold(const Vector& norms, Index m);

/// Ids of groups with a nonzero entry, ascending.
std::vector<int> nonzero_groups(const Matrix& M, const GroupView& view);

} // namespace pocket
