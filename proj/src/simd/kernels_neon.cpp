// AArch64 Advanced SIMD (always present on that architecture). The
// interpolating kernels have no gathers to exploit and stay scalar.

#include <arm_neon.h>

#include "entroframe/simd/kernels.hpp"

namespace entroframe::simd::detail {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void correlate(const double* x, const double* kernel, std::size_t k, double* out,
               std::size_t n_out) {
  std::size_t i = 0;
  for (; i + 4 <= n_out; i += 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const float64x2_t kj = vdupq_n_f64(kernel[j]);
      acc0 = vfmaq_f64(acc0, kj, vld1q_f64(x + i + j));
      acc1 = vfmaq_f64(acc1, kj, vld1q_f64(x + i + j + 2));
    }
    vst1q_f64(out + i, acc0);
    vst1q_f64(out + i + 2, acc1);
  }
  for (; i < n_out; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += kernel[j] * x[i + j];
    out[i] = s;
  }
}

double score_sum(const double* w, const double* g, const double* f, std::size_t n, double floor) {
  const float64x2_t vfloor = vdupq_n_f64(floor);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vf = vld1q_f64(f + i);
    const float64x2_t vg = vld1q_f64(g + i);
    const uint64x2_t mask = vcgtq_f64(vf, vfloor);
    const float64x2_t denom = vbslq_f64(mask, vf, one);
    const float64x2_t term = vdivq_f64(vmulq_f64(vld1q_f64(w + i), vmulq_f64(vg, vg)), denom);
    acc = vaddq_f64(acc, vreinterpretq_f64_u64(vandq_u64(vreinterpretq_u64_f64(term), mask)));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) {
    if (f[i] > floor) s += w[i] * g[i] * g[i] / f[i];
  }
  return s;
}

}  // namespace

const Kernels& neon_kernels() {
  static const Kernels k{&dot, &correlate, &score_sum, scalar_kernels().bilinear_line,
                         scalar_kernels().bicubic_line};
  return k;
}

}  // namespace entroframe::simd::detail
