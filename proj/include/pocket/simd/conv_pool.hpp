#pragma once

// Fused dilated convolution + PPV/MAX pooling, the inner loop of every
// feature transform. One scalar reference implementation plus vectorised
// variants chosen at runtime. All variants accumulate in the same order
// (bias added after the weighted sum, no fused multiply-add), so their
// outputs are bit-identical to the scalar reference.

#include <cstddef>
#include <string_view>
#include <vector>

namespace pocket::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct ConvArgs {
  const double* input;     // padded series, at least (out_len - 1) + (len - 1) * dilation + 1 values
  std::size_t out_len;     // number of output positions, >= 1
  const double* weights;
  std::size_t len;
  std::size_t dilation;
  double bias;
};

struct PoolStats {
  std::size_t positives = 0;  // outputs strictly greater than zero
  double max = 0.0;
  double ppv(std::size_t out_len) const {
    return static_cast<double>(positives) / static_cast<double>(out_len);
  }
};

using ConvPoolFn = PoolStats (*)(const ConvArgs&);

PoolStats conv_pool_scalar(const ConvArgs& args);
#if defined(POCKET_HAVE_AVX2)
PoolStats conv_pool_avx2(const ConvArgs& args);
#endif
#if defined(POCKET_HAVE_NEON)
PoolStats conv_pool_neon(const ConvArgs& args);
#endif

/// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);
/// Every variant usable on this machine, scalar first.
std::vector<Isa> available_isas();
/// Throws pocket::ConfigError for unavailable variants.
ConvPoolFn conv_pool_for(Isa isa);
/// Widest available variant; POCKET_SIMD=scalar|avx2|neon overrides.
Isa preferred_isa();

} // namespace pocket::simd
