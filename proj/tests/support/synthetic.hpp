#pragma once

#include "pocket/dataset.hpp"
#include "pocket/linalg.hpp"
#include "pocket/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using pocket::Index;
using pocket::Matrix;

inline Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = nd(rng);
  return M;
}

/// Classification problem whose labels depend only on a few feature columns:
/// label = argmax(X[:, planted] B + sigma * noise). X comes back standardized
/// and Y encoded, exactly as the solvers expect.
struct Planted {
  Matrix X_raw;
  Matrix X;
  Matrix Y;
  std::vector<int> labels;
  std::vector<int> planted;
  int num_classes = 0;
};

inline Planted planted_problem(Index N, Index G, int informative, double sigma, int C, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Planted p;
  p.num_classes = C;
  p.X_raw = gaussian(N, G, rng);
  std::vector<int> ids(static_cast<std::size_t>(G));
  for (Index g = 0; g < G; ++g) ids[static_cast<std::size_t>(g)] = static_cast<int>(g);
  std::shuffle(ids.begin(), ids.end(), rng);
  p.planted.assign(ids.begin(), ids.begin() + informative);
  std::sort(p.planted.begin(), p.planted.end());

  Matrix B = gaussian(informative, C, rng);
  // Keep every planted column clearly informative.
  for (Index i = 0; i < B.rows(); ++i) {
    const double n = B.row(i).norm();
    B.row(i) *= 2.0 / std::max(n, 1e-12);
  }
  Matrix scores = sigma * gaussian(N, C, rng);
  for (int i = 0; i < informative; ++i)
    scores += p.X_raw.col(p.planted[static_cast<std::size_t>(i)]) * B.row(i);
  p.labels.resize(static_cast<std::size_t>(N));
  for (Index n = 0; n < N; ++n) {
    Index best = 0;
    scores.row(n).maxCoeff(&best);
    p.labels[static_cast<std::size_t>(n)] = static_cast<int>(best);
  }
  p.X = pocket::standardize_fit(p.X_raw).first;
  p.Y = pocket::encode_labels(p.labels, C).Y;
  return p;
}

/// Cylinder-bell-funnel series of length L (the classic generator).
inline pocket::TimeSeriesDataset cbf(Index per_class, Index L, std::uint64_t seed, const std::string& name = "CBF") {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> ua(16.0, 32.0), ud(32.0, 96.0);
  pocket::TimeSeriesDataset d;
  d.name = name;
  d.num_classes = 3;
  d.label_tokens = {"1", "2", "3"};
  d.series.resize(3 * per_class, L);
  const double scale = static_cast<double>(L) / 128.0;
  for (Index i = 0; i < 3 * per_class; ++i) {
    const int c = static_cast<int>(i % 3);
    const double a = ua(rng) * scale;
    const double b = a + ud(rng) * scale;
    const double eta = nd(rng);
    for (Index t = 0; t < L; ++t) {
      const double tt = static_cast<double>(t);
      const double in = (tt >= a && tt <= b) ? 1.0 : 0.0;
      double shape = 1.0;
      if (c == 1) shape = (tt - a) / (b - a);
      if (c == 2) shape = (b - tt) / (b - a);
      d.series(i, t) = (6.0 + eta) * in * shape + nd(rng);
    }
    d.labels.push_back(c);
  }
  return d;
}

inline void write_ucr_tsv(const std::filesystem::path& path, const pocket::TimeSeriesDataset& d) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out.precision(17);
  for (Index i = 0; i < d.size(); ++i) {
    out << d.label_tokens[static_cast<std::size_t>(d.labels[static_cast<std::size_t>(i)])];
    for (Index t = 0; t < d.length(); ++t) out << '\t' << d.series(i, t);
    out << '\n';
  }
}

/// Writes a CBF train/test pair as <dir>/<name>/<name>_{TRAIN,TEST}.tsv.
inline void write_cbf_dataset(const std::filesystem::path& dir, const std::string& name, Index train_per_class,
                              Index test_per_class, Index L, std::uint64_t seed) {
  write_ucr_tsv(dir / name / (name + "_TRAIN.tsv"), cbf(train_per_class, L, seed, name));
  write_ucr_tsv(dir / name / (name + "_TEST.tsv"), cbf(test_per_class, L, seed + 1, name));
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pocket-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline double rel_fro(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

} // namespace testsupport
