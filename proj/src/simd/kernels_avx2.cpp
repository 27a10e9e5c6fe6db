// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "entroframe/simd/kernels.hpp"

namespace entroframe::simd::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void correlate(const double* x, const double* kernel, std::size_t k, double* out,
               std::size_t n_out) {
  std::size_t i = 0;
  for (; i + 8 <= n_out; i += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      const __m256d kj = _mm256_broadcast_sd(kernel + j);
      acc0 = _mm256_fmadd_pd(kj, _mm256_loadu_pd(x + i + j), acc0);
      acc1 = _mm256_fmadd_pd(kj, _mm256_loadu_pd(x + i + j + 4), acc1);
    }
    _mm256_storeu_pd(out + i, acc0);
    _mm256_storeu_pd(out + i + 4, acc1);
  }
  for (; i + 4 <= n_out; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      acc = _mm256_fmadd_pd(_mm256_broadcast_sd(kernel + j), _mm256_loadu_pd(x + i + j), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n_out; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += kernel[j] * x[i + j];
    out[i] = s;
  }
}

double score_sum(const double* w, const double* g, const double* f, std::size_t n, double floor) {
  const __m256d vfloor = _mm256_set1_pd(floor);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vf = _mm256_loadu_pd(f + i);
    const __m256d vg = _mm256_loadu_pd(g + i);
    const __m256d mask = _mm256_cmp_pd(vf, vfloor, _CMP_GT_OQ);
    const __m256d denom = _mm256_blendv_pd(one, vf, mask);
    const __m256d term =
        _mm256_div_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_mul_pd(vg, vg)), denom);
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, mask));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    if (f[i] > floor) s += w[i] * g[i] * g[i] / f[i];
  }
  return s;
}

double bilinear_line(const double* values, std::size_t nx, std::size_t ny, double x0, double y0,
                     double dx, double dy, const double* w, std::size_t count) {
  const auto max_ix = static_cast<std::ptrdiff_t>(nx) - 2;
  const auto max_iy = static_cast<std::ptrdiff_t>(ny) - 2;
  const __m256d lanes = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d vx0 = _mm256_set1_pd(x0), vy0 = _mm256_set1_pd(y0);
  const __m256d vdx = _mm256_set1_pd(dx), vdy = _mm256_set1_pd(dy);
  const __m256d vmax_ix = _mm256_set1_pd(static_cast<double>(max_ix));
  const __m256d vmax_iy = _mm256_set1_pd(static_cast<double>(max_iy));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m128i vnx = _mm_set1_epi32(static_cast<int>(nx));
  const double* v01 = values + 1;
  const double* v10 = values + nx;
  const double* v11 = values + nx + 1;

  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d kk = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), lanes);
    const __m256d fx = _mm256_add_pd(vx0, _mm256_mul_pd(kk, vdx));
    const __m256d fy = _mm256_add_pd(vy0, _mm256_mul_pd(kk, vdy));
    const __m256d flx = _mm256_max_pd(_mm256_min_pd(_mm256_floor_pd(fx), vmax_ix), zero);
    const __m256d fly = _mm256_max_pd(_mm256_min_pd(_mm256_floor_pd(fy), vmax_iy), zero);
    const __m256d a = _mm256_sub_pd(fx, flx);
    const __m256d b = _mm256_sub_pd(fy, fly);
    const __m128i idx = _mm_add_epi32(_mm256_cvttpd_epi32(flx),
                                      _mm_mullo_epi32(_mm256_cvttpd_epi32(fly), vnx));
    const __m256d c00 = _mm256_i32gather_pd(values, idx, 8);
    const __m256d c01 = _mm256_i32gather_pd(v01, idx, 8);
    const __m256d c10 = _mm256_i32gather_pd(v10, idx, 8);
    const __m256d c11 = _mm256_i32gather_pd(v11, idx, 8);
    const __m256d ia = _mm256_sub_pd(one, a);
    const __m256d lower = _mm256_add_pd(_mm256_mul_pd(ia, c00), _mm256_mul_pd(a, c01));
    const __m256d upper = _mm256_add_pd(_mm256_mul_pd(ia, c10), _mm256_mul_pd(a, c11));
    const __m256d val =
        _mm256_add_pd(_mm256_mul_pd(_mm256_sub_pd(one, b), lower), _mm256_mul_pd(b, upper));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), val, acc);
  }
  double s = hsum(acc);
  for (; k < count; ++k) {
    const double fx = x0 + static_cast<double>(k) * dx;
    const double fy = y0 + static_cast<double>(k) * dy;
    const auto ix = std::clamp(static_cast<std::ptrdiff_t>(std::floor(fx)), std::ptrdiff_t{0}, max_ix);
    const auto iy = std::clamp(static_cast<std::ptrdiff_t>(std::floor(fy)), std::ptrdiff_t{0}, max_iy);
    const double a = fx - static_cast<double>(ix);
    const double b = fy - static_cast<double>(iy);
    const double* row = values + iy * static_cast<std::ptrdiff_t>(nx) + ix;
    const double lower = (1.0 - a) * row[0] + a * row[1];
    const double upper = (1.0 - a) * row[nx] + a * row[nx + 1];
    s += w[k] * ((1.0 - b) * lower + b * upper);
  }
  return s;
}

void cubic_weights(__m256d a, __m256d* c) {
  const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0);
  const __m256d half = _mm256_set1_pd(0.5), sixth = _mm256_set1_pd(1.0 / 6.0);
  const __m256d am1 = _mm256_sub_pd(a, one), am2 = _mm256_sub_pd(a, two), ap1 = _mm256_add_pd(a, one);
  const __m256d a_am1 = _mm256_mul_pd(a, am1);
  const __m256d am1_am2 = _mm256_mul_pd(am1, am2);
  const __m256d ap1_a = _mm256_mul_pd(ap1, a);
  c[0] = _mm256_mul_pd(_mm256_mul_pd(a_am1, am2), _mm256_set1_pd(-1.0 / 6.0));
  c[1] = _mm256_mul_pd(_mm256_mul_pd(ap1, am1_am2), half);
  c[2] = _mm256_mul_pd(_mm256_mul_pd(ap1_a, am2), _mm256_set1_pd(-0.5));
  c[3] = _mm256_mul_pd(_mm256_mul_pd(ap1_a, am1), sixth);
}

double bicubic_line(const double* values, std::size_t nx, std::size_t ny, double x0, double y0,
                    double dx, double dy, const double* w, std::size_t count) {
  const auto max_ix = static_cast<std::ptrdiff_t>(nx) - 3;
  const auto max_iy = static_cast<std::ptrdiff_t>(ny) - 3;
  const auto stride = static_cast<std::ptrdiff_t>(nx);
  const __m256d lanes = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d vx0 = _mm256_set1_pd(x0), vy0 = _mm256_set1_pd(y0);
  const __m256d vdx = _mm256_set1_pd(dx), vdy = _mm256_set1_pd(dy);
  const __m256d vmax_ix = _mm256_set1_pd(static_cast<double>(max_ix));
  const __m256d vmax_iy = _mm256_set1_pd(static_cast<double>(max_iy));
  const __m256d vmin = _mm256_set1_pd(1.0);
  const __m128i vnx = _mm_set1_epi32(static_cast<int>(nx));
  const __m128i vcorner = _mm_set1_epi32(static_cast<int>(nx) + 1);

  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d kk = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), lanes);
    const __m256d fx = _mm256_add_pd(vx0, _mm256_mul_pd(kk, vdx));
    const __m256d fy = _mm256_add_pd(vy0, _mm256_mul_pd(kk, vdy));
    const __m256d flx = _mm256_max_pd(_mm256_min_pd(_mm256_floor_pd(fx), vmax_ix), vmin);
    const __m256d fly = _mm256_max_pd(_mm256_min_pd(_mm256_floor_pd(fy), vmax_iy), vmin);
    __m256d cx[4], cy[4];
    cubic_weights(_mm256_sub_pd(fx, flx), cx);
    cubic_weights(_mm256_sub_pd(fy, fly), cy);
    // Index of the stencil corner (ix - 1, iy - 1).
    const __m128i idx = _mm_sub_epi32(
        _mm_add_epi32(_mm256_cvttpd_epi32(flx), _mm_mullo_epi32(_mm256_cvttpd_epi32(fly), vnx)), vcorner);
    __m256d val = _mm256_setzero_pd();
    for (int r = 0; r < 4; ++r) {
      const double* row = values + r * stride;
      __m256d line = _mm256_mul_pd(cx[0], _mm256_i32gather_pd(row, idx, 8));
      line = _mm256_fmadd_pd(cx[1], _mm256_i32gather_pd(row + 1, idx, 8), line);
      line = _mm256_fmadd_pd(cx[2], _mm256_i32gather_pd(row + 2, idx, 8), line);
      line = _mm256_fmadd_pd(cx[3], _mm256_i32gather_pd(row + 3, idx, 8), line);
      val = _mm256_fmadd_pd(cy[r], line, val);
    }
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), val, acc);
  }
  double s = hsum(acc);
  if (k < count) {
    s += scalar_kernels().bicubic_line(values, nx, ny, x0 + static_cast<double>(k) * dx,
                                       y0 + static_cast<double>(k) * dy, dx, dy, w + k, count - k);
  }
  return s;
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{&dot, &correlate, &score_sum, &bilinear_line, &bicubic_line};
  return k;
}

}  // namespace entroframe::simd::detail
