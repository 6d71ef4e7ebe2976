#pragma once

#include "pocket/linalg.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace pocket {

/// N labelled, equal-length univariate series. Labels are dense indices into
/// `label_tokens`, which keeps the raw token for each class.
struct TimeSeriesDataset {
  std::string name;
  Matrix series;                       // N x L, one row per sample
  std::vector<int> labels;             // N entries in [0, num_classes)
  int num_classes = 0;
  std::vector<std::string> label_tokens;

  Index size() const { return series.rows(); }
  Index length() const { return series.cols(); }
};

/// Reads a UCR-archive TSV file. The delimiter (tab or comma) is detected
/// from the first record. "NaN", empty fields and other non-finite values
/// become 0. Labels are numbered by first appearance.
TimeSeriesDataset load_ucr_tsv(const std::filesystem::path& path);

/// Same as load_ucr_tsv, but labels are mapped through an existing token
/// list; an unseen token is a DataError.
TimeSeriesDataset load_ucr_tsv(const std::filesystem::path& path,
                               const std::vector<std::string>& label_tokens);

/// Loads `<dir>/<name>/<name>_TRAIN.tsv` and `<dir>/<name>/<name>_TEST.tsv`,
/// mapping test labels with the training split's mapping.
std::pair<TimeSeriesDataset, TimeSeriesDataset>
train_test_pair(const std::filesystem::path& dir, const std::string& name);

/// Per-series z-normalisation (mean 0, standard deviation 1; constant series
/// are only centred). Not applied by the loaders.
void znormalize_rows(Matrix& series);

} // namespace pocket
