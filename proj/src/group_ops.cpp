#include "pocket/group_ops.hpp"

#include "pocket/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pocket {

GroupView::GroupView(std::vector<std::vector<Index>> groups, Index num_rows)
    : groups_(std::move(groups)), num_rows_(num_rows) {
  std::vector<char> seen(static_cast<std::size_t>(num_rows), 0);
  Index covered = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw DimensionError("GroupView: empty group");
    for (Index r : g) {
      if (r < 0 || r >= num_rows) throw DimensionError("GroupView: row index out of range");
      if (seen[static_cast<std::size_t>(r)]) throw DimensionError("GroupView: groups overlap");
      seen[static_cast<std::size_t>(r)] = 1;
      ++covered;
    }
  }
  if (covered != num_rows) throw DimensionError("GroupView: groups do not cover every row");
}

GroupView GroupView::contiguous(Index num_groups, Index width) {
  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(num_groups));
  for (Index g = 0; g < num_groups; ++g)
    for (Index c = 0; c < width; ++c) groups[static_cast<std::size_t>(g)].push_back(g * width + c);
  return GroupView(std::move(groups), num_groups * width);
}

std::vector<Index> GroupView::rows_of(const std::vector<int>& group_ids) const {
  std::vector<Index> out;
  for (int g : group_ids) {
    if (g < 0 || g >= size()) throw DimensionError("GroupView::rows_of: unknown group");
    const auto& r = rows(g);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

Vector group_norms(const Matrix& M, const GroupView& view) {
  if (M.rows() != view.num_rows()) throw DimensionError("group_norms: row count does not match view");
  Vector norms(view.size());
  for (Index g = 0; g < view.size(); ++g) {
    double sq = 0.0;
    for (Index r : view.rows(g)) sq += M.row(r).squaredNorm();
    norms(g) = std::sqrt(sq);
  }
  return norms;
}

DynamicThreshold dynamic_threshold(const Vector& norms, Index m) {
  if (m < 1 || m >= norms.size())
    throw ConfigError("dynamic_threshold: need 1 <= m < G (m = " + std::to_string(m) +
                      ", G = " + std::to_string(norms.size()) + ")");
  DynamicThreshold t;
  t.order.resize(static_cast<std::size_t>(norms.size()));
  std::iota(t.order.begin(), t.order.end(), Index{0});
  std::stable_sort(t.order.begin(), t.order.end(),
                   [&](Index a, Index b) { return norms(a) > norms(b); });
  t.value = norms(t.order[static_cast<std::size_t>(m)]);
  return t;
}

Matrix group_soft_threshold(const Matrix& Wtilde, double threshold, const GroupView& view) {
  if (!(threshold >= 0.0)) throw ConfigError("group_soft_threshold: threshold must be >= 0");
  if (Wtilde.rows() != view.num_rows())
    throw DimensionError("group_soft_threshold: row count does not match view");
  Matrix out = Matrix::Zero(Wtilde.rows(), Wtilde.cols());
  for (Index g = 0; g < view.size(); ++g) {
    double sq = 0.0;
    for (Index r : view.rows(g)) sq += Wtilde.row(r).squaredNorm();
    const double norm = std::sqrt(sq);
    if (norm == 0.0) continue;  // 0/0 = 1 convention: zero stays zero
    const double scale = std::max(1.0 - threshold / norm, 0.0);
    if (scale == 0.0) continue;
    for (Index r : view.rows(g)) out.row(r) = Wtilde.row(r) * scale;
  }
  return out;
}

double relative_threshold(const Vector& norms, Index m) {
  const auto t = dynamic_threshold(norms, m);
  const double top = norms(t.order.front());
  if (t.value == 0.0) return std::numeric_limits<double>::infinity();
  return top / t.value;
}

std::vector<int> nonzero_groups(const Matrix& M, const GroupView& view) {
  std::vector<int> out;
  for (Index g = 0; g < view.size(); ++g) {
    bool nz = false;
    for (Index r : view.rows(g)) nz = nz || (M.row(r).array() != 0.0).any();
    if (nz) out.push_back(static_cast<int>(g));
  }
  return out;
}

} // namespace pocket
