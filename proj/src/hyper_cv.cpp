#include "pocket/hyper_cv.hpp"

#include "pocket/admm.hpp"
#include "pocket/error.hpp"
#include "pocket/parallel.hpp"
#include "pocket/pocket.hpp"
#include "pocket/preprocess.hpp"
#include "pocket/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <tuple>

namespace pocket {

std::vector<HyperPoint> k_grid(const std::vector<double>& ks) {
  std::vector<HyperPoint> out;
  for (double k : ks) out.push_back({k, 1.0, 1.0});
  return out;
}

std::vector<HyperPoint> rho_grid(const std::vector<double>& rho1s, const std::vector<double>& rho2s) {
  std::vector<HyperPoint> out;
  for (double r1 : rho1s)
    for (double r2 : rho2s) out.push_back({1.0, r1, r2});
  return out;
}

std::vector<HyperPoint> pocket_k_grid() { return k_grid({0.01, 0.1, 1, 10, 100, 1000}); }

std::vector<HyperPoint> admm_rho_grid() {
  const std::vector<double> v{0.01, 0.1, 1, 10, 100};
  return rho_grid(v, v);
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int num_classes, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw ConfigError("stratified_folds: need at least two folds");
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) throw ConfigError("stratified_folds: bad label");
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  // Continue dealing where the previous class stopped so fold sizes stay balanced.
  int next = 0;
  for (auto& m : members) {
    std::shuffle(m.begin(), m.end(), rng);
    for (std::size_t i : m) {
      fold[i] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

namespace {

struct FoldData {
  Matrix X_train;
  Matrix Y_train;
  Matrix X_val;
  std::vector<int> val_labels;
};

FoldData make_fold(const Matrix& X_raw, const std::vector<int>& labels, int num_classes,
                   const std::vector<int>& fold_of, int fold) {
  std::vector<Index> train_rows, val_rows;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (fold_of[i] == fold ? val_rows : train_rows).push_back(static_cast<Index>(i));
  std::vector<int> train_labels;
  FoldData f;
  for (Index r : train_rows) train_labels.push_back(labels[static_cast<std::size_t>(r)]);
  for (Index r : val_rows) f.val_labels.push_back(labels[static_cast<std::size_t>(r)]);
  auto [Xs, stdz] = standardize_fit(select_rows(X_raw, train_rows));
  f.X_train = std::move(Xs);
  f.X_val = standardize_apply(select_rows(X_raw, val_rows), stdz);
  f.Y_train = encode_labels(train_labels, num_classes).Y;
  return f;
}

double evaluate_point(const FoldData& f, const Gram& gram, const GroupView& view,
                      const HyperPoint& p, const SolverSpec& solver) {
  PruneResult r;
  if (solver.method == Method::Pocket) {
    PocketConfig cfg;
    cfg.m = solver.m;
    cfg.k = p.k;
    cfg.iterations = solver.iterations;
    r = stage1(f.X_train, f.Y_train, cfg, view, &gram);
  } else {
    AdmmConfig cfg;
    cfg.m = solver.m;
    cfg.rho1 = p.rho1;
    cfg.rho2 = p.rho2;
    cfg.iterations = solver.iterations;
    r = admm_prune(f.X_train, f.Y_train, view, cfg, &gram);
  }
  RidgeModel model{r.W_pruned, 0.0, r.kept_columns};
  return accuracy(predict(f.X_val, model), f.val_labels);
}

} // namespace

bool preferred_point(const HyperPoint& a, const HyperPoint& b, Method method) {
  if (method == Method::Pocket) {
    const double da = std::abs(std::log(a.k)), db = std::abs(std::log(b.k));
    if (da != db) return da < db;
    return a.k < b.k;
  }
  return std::tie(a.rho1, a.rho2) < std::tie(b.rho1, b.rho2);
}

CvResult cv_select(const Matrix& X_raw, const std::vector<int>& labels, int num_classes,
                   const GroupView& view, const CvPlan& plan, const SolverSpec& solver) {
  if (plan.grid.empty()) throw ConfigError("cv_select: empty grid");
  if (static_cast<Index>(labels.size()) != X_raw.rows())
    throw DimensionError("cv_select: label count does not match X");
  if (plan.folds < 2) throw ConfigError("cv_select: need at least two folds");

  std::vector<int> count(static_cast<std::size_t>(num_classes), 0);
  for (int l : labels) {
    if (l < 0 || l >= num_classes) throw ConfigError("cv_select: label out of range");
    ++count[static_cast<std::size_t>(l)];
  }
  int min_count = std::numeric_limits<int>::max();
  for (int c : count)
    if (c > 0) min_count = std::min(min_count, c);

  CvResult result;
  result.folds_used = std::min(plan.folds, min_count);
  if (result.folds_used < 2) {
    result.bypassed = true;
    result.folds_used = 0;
    result.best = HyperPoint{};
    return result;
  }

  const auto fold_of = stratified_folds(labels, num_classes, result.folds_used, plan.seed);
  const std::size_t npts = plan.grid.size();
  result.fold_accuracy.assign(npts, std::vector<double>(static_cast<std::size_t>(result.folds_used)));
  for (int fold = 0; fold < result.folds_used; ++fold) {
    const FoldData f = make_fold(X_raw, labels, num_classes, fold_of, fold);
    const Gram gram(f.X_train);
    parallel_for(npts, plan.threads, [&](std::size_t p) {
      result.fold_accuracy[p][static_cast<std::size_t>(fold)] =
          evaluate_point(f, gram, view, plan.grid[p], solver);
    });
  }

  std::size_t best = 0;
  for (std::size_t p = 0; p < npts; ++p) {
    const auto& acc = result.fold_accuracy[p];
    double sum = 0.0;
    for (double a : acc) sum += a;
    result.mean_accuracy.push_back(sum / static_cast<double>(acc.size()));
  }
  for (std::size_t p = 1; p < npts; ++p) {
    const double a = result.mean_accuracy[p], b = result.mean_accuracy[best];
    if (a > b + 1e-12 || (std::abs(a - b) <= 1e-12 && preferred_point(plan.grid[p], plan.grid[best], solver.method)))
      best = p;
  }
  result.best = plan.grid[best];
  return result;
}

void write_cv_report_csv(std::ostream& out, const CvPlan& plan, const CvResult& result) {
  out << "point,k,rho1,rho2,fold,accuracy\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t p = 0; p < result.fold_accuracy.size(); ++p) {
    const auto& g = plan.grid[p];
    for (std::size_t f = 0; f < result.fold_accuracy[p].size(); ++f)
      out << p << ',' << g.k << ',' << g.rho1 << ',' << g.rho2 << ',' << f << ','
          << result.fold_accuracy[p][f] << '\n';
    out << p << ',' << g.k << ',' << g.rho1 << ',' << g.rho2 << ",mean," << result.mean_accuracy[p] << '\n';
  }
}

} // namespace pocket
