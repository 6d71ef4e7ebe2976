#include "pocket/simd/conv_pool.hpp"

#include <immintrin.h>

#include <bit>
#include <limits>

namespace pocket::simd {

namespace {

inline __m256d response4(const double* x, const ConvArgs& a, __m256d bias) {
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t j = 0; j < a.len; ++j)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(a.weights[j]),
                                           _mm256_loadu_pd(x + j * a.dilation)));
  return _mm256_add_pd(acc, bias);
}

} // namespace

PoolStats conv_pool_avx2(const ConvArgs& a) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d bias = _mm256_set1_pd(a.bias);
  __m256d vmax0 = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d vmax1 = vmax0;
  std::size_t positives = 0;

  std::size_t i = 0;
  for (; i + 8 <= a.out_len; i += 8) {
    const __m256d v0 = response4(a.input + i, a, bias);
    const __m256d v1 = response4(a.input + i + 4, a, bias);
    positives += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(v0, zero, _CMP_GT_OQ)))));
    positives += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(v1, zero, _CMP_GT_OQ)))));
    vmax0 = _mm256_max_pd(vmax0, v0);
    vmax1 = _mm256_max_pd(vmax1, v1);
  }
  for (; i + 4 <= a.out_len; i += 4) {
    const __m256d v0 = response4(a.input + i, a, bias);
    positives += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(v0, zero, _CMP_GT_OQ)))));
    vmax0 = _mm256_max_pd(vmax0, v0);
  }

  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_max_pd(vmax0, vmax1));
  double m = lanes[0];
  for (int l = 1; l < 4; ++l)
    if (lanes[l] > m) m = lanes[l];

  for (; i < a.out_len; ++i) {
    double acc = 0.0;
    const double* x = a.input + i;
    for (std::size_t j = 0; j < a.len; ++j) acc += a.weights[j] * x[j * a.dilation];
    const double v = acc + a.bias;
    positives += v > 0.0 ? 1 : 0;
    if (v > m) m = v;
  }
  return {positives, m};
}

} // namespace pocket::simd
