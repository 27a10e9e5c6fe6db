#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace entroframe {

/// Points lo, lo + step, ..., lo + (n-1) step.
struct UniformGrid {
  double lo = -10.0;
  double step = 20.0 / 2048.0;
  std::size_t n = 2049;

  static UniformGrid symmetric(double half_width, std::size_t points);

  double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
  double hi() const { return at(n - 1); }
  /// Fractional index of x.
  double index_of(double x) const { return (x - lo) / step; }

  bool operator==(const UniformGrid& o) const;
};

/// Composite Simpson weights; n must be odd and >= 3.
std::vector<double> simpson_weights(std::size_t n, double step);

/// Composite trapezoid weights; n >= 2.
std::vector<double> trapezoid_weights(std::size_t n, double step);

/// sum_i w[i] * v[i] through the active SIMD kernel.
double weighted_sum(std::span<const double> weights, std::span<const double> values);

/// Gauss-Hermite rule for the standard Gaussian probability measure:
/// sum_k weights[k] g(nodes[k]) ~ int g dgamma, exact for polynomials of
/// degree < 2n.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per n and cached.
const GaussHermiteRule& gauss_hermite(std::size_t n);

/// Standard normal cdf and density.
double normal_cdf(double x);
double normal_pdf(double x);

}  // namespace entroframe
