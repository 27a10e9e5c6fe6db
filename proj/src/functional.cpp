#include "entroframe/functional.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe {

namespace {

constexpr double kFloor = 1e-300;
constexpr double kNonSmoothRatio = 0.05;
constexpr double kNonSmoothAbs = 1e-12;

double xlogx(double v) { return v < kFloor ? 0.0 : v * std::log(v); }

// Central differences with step h (d1) and 2h (d2), strided access.
struct Gradients {
  std::vector<double> d1, d2;
};

Gradients differences(const double* f, std::size_t n, std::size_t stride, double h) {
  Gradients g{std::vector<double>(n), std::vector<double>(n)};
  auto at = [&](std::size_t i) { return f[i * stride]; };
  g.d1[0] = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  g.d1[n - 1] = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) g.d1[i] = (at(i + 1) - at(i - 1)) / (2.0 * h);
  g.d2 = g.d1;
  for (std::size_t i = 2; i + 2 < n; ++i) g.d2[i] = (at(i + 2) - at(i - 2)) / (4.0 * h);
  return g;
}

std::vector<double> richardson(const Gradients& g) {
  std::vector<double> out(g.d1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * g.d1[i] - g.d2[i]) / 3.0;
  return out;
}

bool disagree(double a, double b) {
  const double diff = std::abs(a - b);
  return diff > kNonSmoothAbs && diff > kNonSmoothRatio * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  return m == Method::ClosedForm ? "closed_form" : "quadrature";
}

std::vector<double> grid_derivative(std::span<const double> f, double step) {
  if (f.size() < 5) throw Error(ErrorKind::InvalidGrid, "derivative needs at least 5 samples");
  return richardson(differences(f.data(), f.size(), 1, step));
}

EntropyValue entropy(const GridDensity1D& f) {
  const auto w = quadrature_weights(f.reference(), f.grid());
  const auto v = f.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * xlogx(v[i]);
  return {s, f.reference(), Method::Quadrature};
}

EntropyValue entropy(const GridDensity2D& f) {
  const auto w = quadrature_weights(f.reference(), f.grid());
  const std::size_t n = f.grid().n;
  std::vector<double> row(n);
  double s = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) row[ix] = xlogx(f.at(ix, iy));
    s += w[iy] * weighted_sum(w, row);
  }
  return {s, f.reference(), Method::Quadrature};
}

EntropyValue entropy(const GaussianDensity& f) {
  const int n = f.dimension();
  const Mat2 c = f.covariance();
  const double logdet = n == 1 ? std::log(c.a11) : std::log(c.det());
  double s = 0.0;
  if (f.reference() == ReferenceMeasure::Lebesgue) {
    s = -0.5 * n * std::log(2.0 * std::numbers::pi * std::numbers::e) - 0.5 * logdet;
  } else {
    const Vec2 m = f.mean();
    const double tr = n == 1 ? c.a11 : c.a11 + c.a22;
    const double mm = n == 1 ? m.x * m.x : dot(m, m);
    s = 0.5 * (tr + mm - n - logdet);
  }
  return {s, f.reference(), Method::ClosedForm};
}

FisherValue fisher(const GridDensity1D& f) {
  const auto w = quadrature_weights(f.reference(), f.grid());
  const auto v = f.values();
  const Gradients g = differences(v.data(), v.size(), 1, f.grid().step);
  const auto rich = richardson(g);
  const auto& k = simd::kernels();
  const double value = k.score_sum(w.data(), rich.data(), v.data(), v.size(), kFloor);
  const double coarse = k.score_sum(w.data(), g.d1.data(), v.data(), v.size(), kFloor);
  const double wide = k.score_sum(w.data(), g.d2.data(), v.data(), v.size(), kFloor);
  return {value, f.reference(), Method::Quadrature, disagree(coarse, wide)};
}

FisherValue fisher(const GridDensity2D& f) {
  const auto w = quadrature_weights(f.reference(), f.grid());
  const std::size_t n = f.grid().n;
  const double h = f.grid().step;
  const auto v = f.values();
  const auto& k = simd::kernels();
  double value = 0.0, coarse = 0.0, wide = 0.0;
  std::vector<double> wr(n), col(n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) wr[ix] = w[ix] * w[iy];
    const double* row = v.data() + iy * n;
    const Gradients g = differences(row, n, 1, h);
    const auto r = richardson(g);
    value += k.score_sum(wr.data(), r.data(), row, n, kFloor);
    coarse += k.score_sum(wr.data(), g.d1.data(), row, n, kFloor);
    wide += k.score_sum(wr.data(), g.d2.data(), row, n, kFloor);
  }
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      wr[iy] = w[ix] * w[iy];
      col[iy] = v[iy * n + ix];
    }
    const Gradients g = differences(col.data(), n, 1, h);
    const auto r = richardson(g);
    value += k.score_sum(wr.data(), r.data(), col.data(), n, kFloor);
    coarse += k.score_sum(wr.data(), g.d1.data(), col.data(), n, kFloor);
    wide += k.score_sum(wr.data(), g.d2.data(), col.data(), n, kFloor);
  }
  return {value, f.reference(), Method::Quadrature, disagree(coarse, wide)};
}

FisherValue fisher(const GaussianDensity& f) {
  const Mat2 c = f.covariance();
  double value = 0.0;
  if (f.dimension() == 1) {
    const double v = c.a11;
    if (f.reference() == ReferenceMeasure::Lebesgue) {
      value = 1.0 / v;
    } else {
      const double b = 1.0 - 1.0 / v;
      value = b * b * v + f.mean1d() * f.mean1d();
    }
  } else {
    const Mat2 inv = c.inverse();
    if (f.reference() == ReferenceMeasure::Lebesgue) {
      value = inv.a11 + inv.a22;
    } else {
      const Mat2 b{1.0 - inv.a11, -inv.a12, -inv.a21, 1.0 - inv.a22};
      const Mat2 q = b * c * b;
      value = q.a11 + q.a22 + dot(f.mean(), f.mean());
    }
  }
  return {value, f.reference(), Method::ClosedForm, false};
}

double lp_norm(const GridFunction1D& f, double p, ReferenceMeasure r) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidExponents, fmt::format("L^p norm needs p >= 1, got {}", p));
  }
  const auto w = quadrature_weights(r, f.grid());
  const auto v = f.values();
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::pow(std::abs(v[i]), p);
  return std::pow(weighted_sum(w, a), 1.0 / p);
}

double lp_norm(const GridDensity1D& f, double p) { return lp_norm(f.function(), p, f.reference()); }

}  // namespace entroframe
