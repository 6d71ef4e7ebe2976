#include "pocket/transform.hpp"

#include "pocket/error.hpp"
#include "pocket/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace pocket {

std::vector<double> convolve1d(std::span<const double> series, const RocketKernel& kernel) {
  const int L = static_cast<int>(series.size());
  const int out_len = kernel.output_length(L);
  if (kernel.length() < 1 || kernel.dilation < 1 || kernel.padding < 0 || out_len < 1)
    throw DimensionError("convolve1d: kernel does not fit a series of length " + std::to_string(L));
  std::vector<double> out(static_cast<std::size_t>(out_len));
  for (int i = 0; i < out_len; ++i) {
    double acc = 0.0;
    for (int j = 0; j < kernel.length(); ++j) {
      const int pos = i + j * kernel.dilation - kernel.padding;
      if (pos >= 0 && pos < L)
        acc += kernel.weights[static_cast<std::size_t>(j)] * series[static_cast<std::size_t>(pos)];
    }
    out[static_cast<std::size_t>(i)] = acc + kernel.bias;
  }
  return out;
}

double ppv(std::span<const double> response) {
  if (response.empty()) throw DimensionError("ppv: empty response");
  const auto n = std::count_if(response.begin(), response.end(), [](double v) { return v > 0.0; });
  return static_cast<double>(n) / static_cast<double>(response.size());
}

double max_feature(std::span<const double> response) {
  if (response.empty()) throw DimensionError("max_feature: empty response");
  return *std::max_element(response.begin(), response.end());
}

std::vector<std::vector<Index>> make_group_map(ModelKind kind, Index num_groups) {
  const Index width = features_per_kernel(kind);
  std::vector<std::vector<Index>> map(static_cast<std::size_t>(num_groups));
  for (Index g = 0; g < num_groups; ++g)
    for (Index c = 0; c < width; ++c) map[static_cast<std::size_t>(g)].push_back(g * width + c);
  return map;
}

Matrix transform(const Matrix& series, const KernelBank& bank, const TransformOptions& opts) {
  const Index n = series.rows();
  const int L = static_cast<int>(series.cols());
  int max_pad = 0;
  for (const auto& k : bank.kernels) {
    if (k.output_length(L) < 1 || k.dilation < 1 || k.padding < 0)
      throw DimensionError("transform: kernel " + std::to_string(k.group_id) +
                           " does not fit series of length " + std::to_string(L));
    max_pad = std::max(max_pad, k.padding);
  }
  const bool with_max = bank.kind == ModelKind::RocketPpvMax;
  const Index width = bank.features_per_kernel();
  const auto conv = simd::conv_pool_for(opts.isa);

  Matrix X(n, static_cast<Index>(bank.size()) * width);
  parallel_for(static_cast<std::size_t>(n), opts.threads, [&](std::size_t row) {
    const auto r = static_cast<Index>(row);
    std::vector<double> padded(static_cast<std::size_t>(L + 2 * max_pad), 0.0);
    for (int j = 0; j < L; ++j) padded[static_cast<std::size_t>(max_pad + j)] = series(r, j);
    for (std::size_t g = 0; g < bank.size(); ++g) {
      const auto& k = bank.kernels[g];
      const auto out_len = static_cast<std::size_t>(k.output_length(L));
      const simd::ConvArgs args{padded.data() + (max_pad - k.padding), out_len, k.weights.data(),
                                k.weights.size(), static_cast<std::size_t>(k.dilation), k.bias};
      const auto stats = conv(args);
      const auto col = static_cast<Index>(g) * width;
      X(r, col) = stats.ppv(out_len);
      if (with_max) X(r, col + 1) = stats.max;
    }
  });
  return X;
}

FeatureMatrix build_feature_matrix(const TimeSeriesDataset& data, const KernelBank& bank,
                                   const TransformOptions& opts) {
  FeatureMatrix fm;
  fm.kind = bank.kind;
  fm.X = transform(data.series, bank, opts);
  fm.group_map = make_group_map(bank.kind, static_cast<Index>(bank.size()));
  return fm;
}

namespace {

constexpr char kMagic[8] = {'P', 'K', 'T', 'F', 'E', 'A', 'T', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError("feature cache: truncated file");
  return v;
}

} // namespace

void save_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& fm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(fm.X.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(fm.X.cols()));
  put<std::int32_t>(out, static_cast<std::int32_t>(fm.kind));
  put<std::uint64_t>(out, fm.group_map.size());
  for (const auto& g : fm.group_map) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.size()));
  out.write(reinterpret_cast<const char*>(fm.X.data()),
            static_cast<std::streamsize>(fm.X.size() * static_cast<Index>(sizeof(double))));
}

FeatureMatrix load_feature_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataError("feature cache: bad magic in " + path.string());
  const auto n = get<std::uint64_t>(in);
  const auto h = get<std::uint64_t>(in);
  const auto kind = get<std::int32_t>(in);
  const auto groups = get<std::uint64_t>(in);
  if (kind < 0 || kind > 2) throw DataError("feature cache: bad model kind");
  FeatureMatrix fm;
  fm.kind = static_cast<ModelKind>(kind);
  Index col = 0;
  for (std::uint64_t g = 0; g < groups; ++g) {
    const auto size = get<std::uint32_t>(in);
    std::vector<Index> cols;
    for (std::uint32_t c = 0; c < size; ++c) cols.push_back(col++);
    fm.group_map.push_back(std::move(cols));
  }
  if (static_cast<std::uint64_t>(col) != h) throw DataError("feature cache: group sizes do not sum to H");
  fm.X.resize(static_cast<Index>(n), static_cast<Index>(h));
  if (!in.read(reinterpret_cast<char*>(fm.X.data()),
               static_cast<std::streamsize>(fm.X.size() * static_cast<Index>(sizeof(double)))))
    throw DataError("feature cache: truncated matrix");
  return fm;
}

} // namespace pocket
