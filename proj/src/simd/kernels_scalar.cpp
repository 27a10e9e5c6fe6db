#include <algorithm>
#include <cmath>

#include "entroframe/simd/kernels.hpp"

namespace entroframe::simd::detail {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void correlate(const double* x, const double* kernel, std::size_t k, double* out,
               std::size_t n_out) {
  for (std::size_t i = 0; i < n_out; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += kernel[j] * x[i + j];
    out[i] = s;
  }
}

double score_sum(const double* w, const double* g, const double* f, std::size_t n, double floor) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] > floor) s += w[i] * g[i] * g[i] / f[i];
  }
  return s;
}

double bilinear_line(const double* values, std::size_t nx, std::size_t ny, double x0, double y0,
                     double dx, double dy, const double* w, std::size_t count) {
  const auto max_ix = static_cast<std::ptrdiff_t>(nx) - 2;
  const auto max_iy = static_cast<std::ptrdiff_t>(ny) - 2;
  double s = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
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

// Lagrange weights for the nodes -1, 0, 1, 2 at offset a.
void cubic_weights(double a, double* c) {
  const double am1 = a - 1.0, am2 = a - 2.0, ap1 = a + 1.0;
  c[0] = -a * am1 * am2 / 6.0;
  c[1] = ap1 * am1 * am2 / 2.0;
  c[2] = -ap1 * a * am2 / 2.0;
  c[3] = ap1 * a * am1 / 6.0;
}

double bicubic_line(const double* values, std::size_t nx, std::size_t ny, double x0, double y0,
                    double dx, double dy, const double* w, std::size_t count) {
  const auto max_ix = static_cast<std::ptrdiff_t>(nx) - 3;
  const auto max_iy = static_cast<std::ptrdiff_t>(ny) - 3;
  const auto stride = static_cast<std::ptrdiff_t>(nx);
  double s = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double fx = x0 + static_cast<double>(k) * dx;
    const double fy = y0 + static_cast<double>(k) * dy;
    const auto ix = std::clamp(static_cast<std::ptrdiff_t>(std::floor(fx)), std::ptrdiff_t{1}, max_ix);
    const auto iy = std::clamp(static_cast<std::ptrdiff_t>(std::floor(fy)), std::ptrdiff_t{1}, max_iy);
    double cx[4], cy[4];
    cubic_weights(fx - static_cast<double>(ix), cx);
    cubic_weights(fy - static_cast<double>(iy), cy);
    const double* base = values + (iy - 1) * stride + (ix - 1);
    double v = 0.0;
    for (int r = 0; r < 4; ++r) {
      const double* row = base + r * stride;
      v += cy[r] * (cx[0] * row[0] + cx[1] * row[1] + cx[2] * row[2] + cx[3] * row[3]);
    }
    s += w[k] * v;
  }
  return s;
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{&dot, &correlate, &score_sum, &bilinear_line, &bicubic_line};
  return k;
}

}  // namespace entroframe::simd::detail
