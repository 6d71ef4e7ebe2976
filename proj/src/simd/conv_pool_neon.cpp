#include "pocket/simd/conv_pool.hpp"

#include <arm_neon.h>

#include <limits>

namespace pocket::simd {

PoolStats conv_pool_neon(const ConvArgs& a) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t bias = vdupq_n_f64(a.bias);
  float64x2_t vmax = vdupq_n_f64(-std::numeric_limits<double>::infinity());
  std::size_t positives = 0;

  std::size_t i = 0;
  for (; i + 2 <= a.out_len; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const double* x = a.input + i;
    for (std::size_t j = 0; j < a.len; ++j)
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(a.weights[j]), vld1q_f64(x + j * a.dilation)));
    const float64x2_t v = vaddq_f64(acc, bias);
    const uint64x2_t gt = vcgtq_f64(v, zero);
    positives += (vgetq_lane_u64(gt, 0) != 0 ? 1 : 0) + (vgetq_lane_u64(gt, 1) != 0 ? 1 : 0);
    vmax = vmaxq_f64(vmax, v);
  }
  double m = vgetq_lane_f64(vmax, 0);
  if (vgetq_lane_f64(vmax, 1) > m) m = vgetq_lane_f64(vmax, 1);

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
