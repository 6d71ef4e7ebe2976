#pragma once

#include "pocket/dataset.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pocket {

enum class ModelKind { RocketPpvMax, RocketPpv, MiniRocket };

std::string_view to_string(ModelKind kind);
/// Accepts both "rocket-ppv-max" and "rocket_ppv_max" spellings.
ModelKind parse_model_kind(std::string_view text);

/// PPV+MAX for rocket_ppv_max, PPV only otherwise.
inline int features_per_kernel(ModelKind kind) {
  return kind == ModelKind::RocketPpvMax ? 2 : 1;
}

/// One dilated 1-D convolution kernel. Output position i of a series x is
///   bias + sum_j weights[j] * xpad[i + j * dilation]
/// where xpad is x with `padding` zeros on both sides.
struct RocketKernel {
  std::vector<double> weights;
  double bias = 0.0;
  int dilation = 1;
  int padding = 0;
  int group_id = 0;

  int length() const { return static_cast<int>(weights.size()); }
  /// Span covered by the kernel: (length - 1) * dilation + 1.
  int receptive_field() const { return (length() - 1) * dilation + 1; }
  /// Number of output positions on a series of length L.
  int output_length(int series_length) const {
    return series_length + 2 * padding - receptive_field() + 1;
  }
};

struct KernelBank {
  ModelKind kind = ModelKind::RocketPpvMax;
  std::vector<RocketKernel> kernels;
  std::uint64_t seed = 0;
  int series_length = 0;

  std::size_t size() const { return kernels.size(); }
  int features_per_kernel() const { return pocket::features_per_kernel(kind); }
  std::size_t num_features() const { return size() * static_cast<std::size_t>(features_per_kernel()); }

  bool operator==(const KernelBank&) const = default;
};

bool operator==(const RocketKernel& a, const RocketKernel& b);

/// Random ROCKET kernels: length uniform on {7, 9, 11}, standard-normal
/// weights re-centred to mean zero, bias uniform on [-1, 1], dilation
/// floor(2^a) with a uniform on [0, log2((L-1)/(l-1))], and "same" padding
/// with probability 1/2. `kind` must be one of the two ROCKET kinds.
KernelBank generate_rocket(std::size_t num_kernels, int series_length, std::uint64_t seed,
                           ModelKind kind = ModelKind::RocketPpvMax);

/// MINIROCKET-style bank of exactly `num_features` (kernel, dilation, bias)
/// combinations built from the 84 length-9 {-1, 2} base kernels.
KernelBank generate_minirocket(std::size_t num_features, const TimeSeriesDataset& train,
                               std::uint64_t seed);

/// The 84 three-position subsets of {0..8}, in lexicographic order.
std::vector<std::array<int, 3>> minirocket_base_patterns();

/// Keeps the kernels whose group ids are in `keep`, in original order.
KernelBank prune_bank(const KernelBank& bank, const std::set<int>& keep);

void write_bank(std::ostream& out, const KernelBank& bank);
KernelBank read_bank(std::istream& in);
void save_bank(const std::filesystem::path& path, const KernelBank& bank);
KernelBank load_bank(const std::filesystem::path& path);

} // namespace pocket
