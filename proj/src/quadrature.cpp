#include "entroframe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe {

UniformGrid UniformGrid::symmetric(double half_width, std::size_t points) {
  if (!(half_width > 0.0) || points < 2) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("invalid grid: half width {}, {} points", half_width, points));
  }
  return {-half_width, 2.0 * half_width / static_cast<double>(points - 1), points};
}

bool UniformGrid::operator==(const UniformGrid& o) const {
  return n == o.n && std::abs(lo - o.lo) <= 1e-12 * std::max(1.0, std::abs(lo)) &&
         std::abs(step - o.step) <= 1e-12 * step;
}

std::vector<double> simpson_weights(std::size_t n, double step) {
  if (n < 3 || n % 2 == 0) {
    throw Error(ErrorKind::InvalidGrid, fmt::format("Simpson rule needs an odd point count >= 3, got {}", n));
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * step / 3.0;
  w.front() = w.back() = step / 3.0;
  return w;
}

std::vector<double> trapezoid_weights(std::size_t n, double step) {
  if (n < 2) throw Error(ErrorKind::InvalidGrid, "trapezoid rule needs at least 2 points");
  std::vector<double> w(n, step);
  w.front() = w.back() = step / 2.0;
  return w;
}

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  return simd::kernels().dot(weights.data(), values.data(), std::min(weights.size(), values.size()));
}

namespace {

// Newton iteration on the orthonormal Hermite recurrence (weight e^{-x^2}),
// seeded with the usual asymptotic guesses for the largest roots.
GaussHermiteRule compute_gauss_hermite(std::size_t n) {
  constexpr double kPiM4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = static_cast<int>((n + 1) / 2);
  const int nn = static_cast<int>(n);
  std::vector<double> x(n), w(n);
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(nn), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * x[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * x[1];
    } else {
      z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    }
    double pp = 0.0;
    int it = 0;
    for (; it < 100; ++it) {
      double p1 = kPiM4, p2 = 0.0;
      for (int j = 0; j < nn; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nn) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (it == 100) throw Error(ErrorKind::InvalidArgument, "Gauss-Hermite iteration did not converge");
    const auto a = static_cast<std::size_t>(i);
    const auto b = n - 1 - a;
    x[a] = z;
    x[b] = -z;
    w[a] = w[b] = 2.0 / (pp * pp);
  }
  // Convert to the standard Gaussian probability measure.
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[n - 1 - i] = std::numbers::sqrt2 * x[i];
    rule.weights[n - 1 - i] = w[i] / std::sqrt(std::numbers::pi);
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussHermiteRule> cache;
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Gauss-Hermite rule needs n >= 1");
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
  return it->second;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace entroframe
