#pragma once

#include "pocket/linalg.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace pocket {

/// One solver iteration. `threshold` is the dynamic threshold 1/rho3.
struct TraceEntry {
  int iter = 0;
  double norm_gap = 0.0;                       // ||W - Theta||_F
  double relative_threshold = 0.0;             // largest group norm / threshold
  double reciprocal_relative_threshold = 0.0;  // threshold / largest group norm
  double threshold = 0.0;
};

struct PruneResult {
  std::vector<int> selected_groups;  // ascending group ids with nonzero Theta
  std::vector<Index> kept_columns;   // feature columns (weight rows) of those groups
  Matrix W_pruned;                   // rows of W for kept_columns
  Matrix W;
  Matrix Theta;
  Matrix U;
  std::vector<TraceEntry> trace;
  std::size_t factorizations = 0;
  int iterations = 0;
  /// Fewer than m groups survived (ties at the threshold or zero norms).
  bool degenerate = false;
};

/// CSV header: iter,norm_gap,relative_threshold,reciprocal_relative_threshold,inv_threshold
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

} // namespace pocket
