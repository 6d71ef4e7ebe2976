#pragma once

#include "pocket/dataset.hpp"
#include "pocket/kernel_bank.hpp"
#include "pocket/simd/conv_pool.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace pocket {

/// N x H features plus the kernel -> column binding. Group g owns columns
/// {2g, 2g+1} (PPV, MAX) for rocket_ppv_max and {g} otherwise.
struct FeatureMatrix {
  Matrix X;
  std::vector<std::vector<Index>> group_map;
  ModelKind kind = ModelKind::RocketPpvMax;

  Index num_groups() const { return static_cast<Index>(group_map.size()); }
};

struct TransformOptions {
  std::size_t threads = 1;
  simd::Isa isa = simd::preferred_isa();
};

/// Full convolution response of one kernel (zero padding applied).
std::vector<double> convolve1d(std::span<const double> series, const RocketKernel& kernel);

/// Fraction of entries strictly greater than zero.
double ppv(std::span<const double> response);
double max_feature(std::span<const double> response);

/// Column layout for a bank of `num_groups` kernels.
std::vector<std::vector<Index>> make_group_map(ModelKind kind, Index num_groups);

/// Applies every kernel of `bank` to every row of `series` (N x L).
Matrix transform(const Matrix& series, const KernelBank& bank, const TransformOptions& opts = {});

FeatureMatrix build_feature_matrix(const TimeSeriesDataset& data, const KernelBank& bank,
                                   const TransformOptions& opts = {});

/// Binary feature cache: magic, N, H, kind, G, group sizes, then N*H doubles
/// in column-major order.
void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& fm);
FeatureMatrix load_feature_matrix(const std::filesystem::path& path);

} // namespace pocket
