#pragma once

#include "pocket/group_ops.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace pocket {

enum class Method { Pocket, Admm };

/// One grid point. POCKET reads `k`; the ADMM baseline reads (rho1, rho2).
struct HyperPoint {
  double k = 1.0;
  double rho1 = 1.0;
  double rho2 = 1.0;
  bool operator==(const HyperPoint&) const = default;
};

/// {0.01, 0.1, 1, 10, 100, 1000}
std::vector<HyperPoint> pocket_k_grid();
/// Every (rho1, rho2) in {0.01, 0.1, 1, 10, 100}^2, rho1 outer.
std::vector<HyperPoint> admm_rho_grid();
std::vector<HyperPoint> k_grid(const std::vector<double>& ks);
std::vector<HyperPoint> rho_grid(const std::vector<double>& rho1s, const std::vector<double>& rho2s);

struct CvPlan {
  int folds = 5;
  std::vector<HyperPoint> grid;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct SolverSpec {
  Method method = Method::Pocket;
  Index m = 1;
  int iterations = 50;
};

struct CvResult {
  HyperPoint best;
  std::vector<double> mean_accuracy;              // per grid point
  std::vector<std::vector<double>> fold_accuracy; // [point][fold]
  int folds_used = 0;
  bool bypassed = false;  // a class had a single sample; fallback point returned
};

/// Fold id for every sample. Each class is shuffled with `seed` and dealt
/// round-robin, so every class with >= folds samples appears in every
/// training split.
std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes, int folds,
                                  std::uint64_t seed);

/// K-fold selection of the solver hyperparameter by held-out accuracy of the
/// pruned (stage 1 / ADMM) classifier. Features are standardized on each
/// training part. When the smallest class has fewer samples than folds the
/// fold count drops to that size; a single-sample class bypasses CV and
/// returns k = 1 (POCKET) or rho1 = rho2 = 1 (ADMM).
CvResult cv_select(const Matrix& X_raw, const std::vector<int>& labels, int num_classes,
                   const GroupView& view, const CvPlan& plan, const SolverSpec& solver);

/// Tie-break between grid points of equal mean accuracy: POCKET prefers the
/// k closest to 1 on a log scale (then the smaller k), ADMM the
/// lexicographically smaller (rho1, rho2).
bool preferred_point(const HyperPoint& a, const HyperPoint& b, Method method);

/// Rows: point,k,rho1,rho2,fold,accuracy ; then one "mean" row per point.
void write_cv_report_csv(std::ostream& out, const CvPlan& plan, const CvResult& result);

} // namespace pocket
