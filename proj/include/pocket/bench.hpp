#pragma once

#include "pocket/hyper_cv.hpp"
#include "pocket/kernel_bank.hpp"
#include "pocket/preprocess.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pocket {

enum class PruneMethod { None, Admm, Pocket };

std::string_view to_string(PruneMethod m);
PruneMethod parse_prune_method(std::string_view text);

struct AccuracyStats {
  std::vector<double> per_repeat;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single repeat
  bool operator==(const AccuracyStats&) const = default;
};

AccuracyStats summarize(std::vector<double> values);

/// Wall-clock seconds summed over repeats.
struct PhaseTiming {
  double cv = 0.0;
  double refit = 0.0;   // stage 1 or ADMM fit on the full training split
  double stage2 = 0.0;
  double sum = 0.0;
  bool operator==(const PhaseTiming&) const = default;
};

struct RunReport {
  std::string dataset;
  std::string model;
  std::string method;
  std::size_t num_kernels = 0;
  Index num_features = 0;
  Index remain = 0;
  double remain_rate = 0.0;
  bool remain_rate_substituted = false;
  bool znormalize = false;
  int iterations = 0;
  int repeats = 0;
  std::vector<std::uint64_t> seeds;
  AccuracyStats unpruned;
  AccuracyStats stage1;
  AccuracyStats stage2;
  std::optional<AccuracyStats> baseline_random;
  std::optional<AccuracyStats> baseline_scratch;
  std::vector<HyperPoint> hyper;       // selected or supplied, per repeat
  std::vector<bool> cv_bypassed;
  std::vector<double> unpruned_alpha;
  std::vector<double> stage2_alpha;
  std::vector<std::size_t> factorizations;
  std::vector<bool> degenerate;
  PhaseTiming timing;
  bool operator==(const RunReport&) const = default;
};

/// Timing is left out unless requested so that reports of seeded runs are
/// byte-identical across machines and re-runs.
nlohmann::json to_json(const RunReport& r, bool with_timing = true);
RunReport report_from_json(const nlohmann::json& j);
nlohmann::json timing_json(const RunReport& r);

struct RunOptions {
  std::filesystem::path dataset_dir = "data/UCR";
  std::string dataset;
  ModelKind model = ModelKind::RocketPpvMax;
  std::size_t num_kernels = 10000;
  std::optional<Index> remain;
  std::optional<double> remain_rate;
  bool remain_rate_substituted = false;
  PruneMethod method = PruneMethod::Pocket;
  int iterations = 50;
  int folds = 5;
  std::vector<double> k_grid{0.01, 0.1, 1, 10, 100, 1000};
  std::vector<double> rho_grid{0.01, 0.1, 1, 10, 100};
  std::optional<double> k;
  std::optional<double> rho1;
  std::optional<double> rho2;
  bool stage2 = true;
  int repeats = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::optional<std::filesystem::path> out;
  bool baseline_random = false;
  bool baseline_scratch = false;
  bool trace = false;
  bool znormalize = false;  // per-series z-normalization before the transform
};

/// Remain count for a bank of `num_groups` kernels from `remain` or `remain_rate`.
Index remain_count(const RunOptions& opts, Index num_groups);

/// Runs `repeats` independent prune experiments (kernel seed = seed + r).
/// With `out` set, writes report.json, timing.json, cv_r<r>.csv,
/// trace_r<r>.csv (with `trace`) and the last repeat's bundle to out/model.
RunReport cmd_prune(const RunOptions& opts);

/// One cmd_prune per rate; with `out` set each run goes to out/rate-<rate>.
std::vector<RunReport> cmd_sweep(const RunOptions& base, const std::vector<double>& rates);

struct BatchEntry {
  std::string dataset;
  double remain_rate = 0.0;
  bool substituted = false;
};

/// Lines "<dataset> <rate>" (whitespace or comma separated, '#' comments).
/// A rate of 1.0 keeps nothing prunable and is replaced by 0.5.
std::vector<BatchEntry> read_batch_file(const std::filesystem::path& path);

struct ModelBundle {
  KernelBank bank;
  Standardizer standardizer;
  Matrix W;
  std::vector<std::string> label_tokens;
  nlohmann::json metadata;
};

void save_bundle(const std::filesystem::path& dir, const ModelBundle& b);
ModelBundle load_bundle(const std::filesystem::path& dir);

/// Accuracy of a saved bundle on the test split of `dataset`.
double cmd_eval(const std::filesystem::path& bundle_dir, const std::filesystem::path& dataset_dir,
                const std::string& dataset, std::size_t threads = 1);

/// Accuracy of a bundle on an already loaded split.
double evaluate_bundle(const ModelBundle& b, const TimeSeriesDataset& test, std::size_t threads = 1);

} // namespace pocket
