#include "pocket/simd/conv_pool.hpp"

#include <limits>

namespace pocket::simd {

PoolStats conv_pool_scalar(const ConvArgs& a) {
  PoolStats s;
  s.max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.out_len; ++i) {
    double acc = 0.0;
    const double* x = a.input + i;
    for (std::size_t j = 0; j < a.len; ++j) acc += a.weights[j] * x[j * a.dilation];
    const double v = acc + a.bias;
    s.positives += v > 0.0 ? 1 : 0;
    if (v > s.max) s.max = v;
  }
  return s;
}

} // namespace pocket::simd
