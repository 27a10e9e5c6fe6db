#include "entroframe/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kRejectDeviation = 1e-2;
constexpr double kSilentDeviation1D = 1e-6;
constexpr double kSilentDeviation2D = 1e-5;
constexpr double kTruncationTol = 1e-4;

void check_density_grid(const UniformGrid& grid) {
  if (grid.n < 65 || grid.n % 2 == 0 || !(grid.step > 0.0)) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("density grids need an odd point count >= 65, got {}", grid.n));
  }
}

void sanitize(std::vector<double>& values) {
  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "density value is not finite");
    peak = std::max(peak, std::abs(v));
  }
  for (double& v : values) {
    if (v < 0.0) {
      if (v < -1e-12 * peak) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("negative density value {:.3e}", v));
      }
      v = 0.0;
    }
  }
}

Normalization normalize(std::vector<double>& values, double mass, double silent) {
  if (!(mass > 0.0) || std::abs(mass - 1.0) > kRejectDeviation) {
    throw Error(ErrorKind::Normalization,
                fmt::format("density integrates to {:.8g}; more than {:g} away from 1", mass,
                            kRejectDeviation));
  }
  Normalization n{mass, 1.0 / mass, std::abs(mass - 1.0) > silent};
  for (double& v : values) v *= n.factor;
  return n;
}

double lerp_at(std::span<const double> v, const UniformGrid& g, double x, Extension ext) {
  const double fx = g.index_of(x);
  const double last = static_cast<double>(g.n - 1);
  if (fx < 0.0 || fx > last) {
    if (ext == Extension::Zero) return 0.0;
    return fx < 0.0 ? v.front() : v.back();
  }
  const auto i = std::min(static_cast<std::size_t>(fx), g.n - 2);
  const double a = fx - static_cast<double>(i);
  return (1.0 - a) * v[i] + a * v[i + 1];
}

double mass_2d(ReferenceMeasure r, const UniformGrid& grid, std::span<const double> values) {
  const auto w = quadrature_weights(r, grid);
  const auto& k = simd::kernels();
  double mass = 0.0;
  for (std::size_t iy = 0; iy < grid.n; ++iy) {
    mass += w[iy] * k.dot(w.data(), values.data() + iy * grid.n, grid.n);
  }
  return mass;
}

// Range of k in [0, kmax] with a + k d inside [0, upper].
std::optional<std::pair<long, long>> inside_range(double a, double d, double upper, long kmax) {
  auto inside = [&](long k) {
    const double v = a + static_cast<double>(k) * d;
    return v >= 0.0 && v <= upper;
  };
  long lo = 0, hi = kmax;
  if (std::abs(d) > 1e-14) {
    const double k1 = (0.0 - a) / d;
    const double k2 = (upper - a) / d;
    lo = std::max(0L, static_cast<long>(std::ceil(std::min(k1, k2))) - 1);
    hi = std::min(kmax, static_cast<long>(std::floor(std::max(k1, k2))) + 1);
  }
  while (lo <= hi && !inside(lo)) ++lo;
  while (hi >= lo && !inside(hi)) --hi;
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace

std::string_view to_string(ReferenceMeasure r) noexcept {
  return r == ReferenceMeasure::Lebesgue ? "lebesgue" : "gaussian";
}

double log_reference_weight(ReferenceMeasure r, double x) {
  return r == ReferenceMeasure::Lebesgue ? 0.0 : -0.5 * x * x - kLogSqrt2Pi;
}

double reference_weight(ReferenceMeasure r, double x) {
  return r == ReferenceMeasure::Lebesgue ? 1.0 : std::exp(-0.5 * x * x - kLogSqrt2Pi);
}

std::vector<double> quadrature_weights(ReferenceMeasure r, const UniformGrid& grid) {
  auto w = simpson_weights(grid.n, grid.step);
  if (r == ReferenceMeasure::StandardGaussian) {
    for (std::size_t i = 0; i < grid.n; ++i) w[i] *= reference_weight(r, grid.at(i));
  }
  return w;
}

// --- GridFunction1D ---------------------------------------------------------

GridFunction1D::GridFunction1D(UniformGrid grid, std::vector<double> values, Extension ext)
    : grid_(grid), values_(std::move(values)), ext_(ext) {
  if (grid_.n < 4 || values_.size() != grid_.n || !(grid_.step > 0.0)) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("grid of {} points holds {} values", grid_.n, values_.size()));
  }
}

double GridFunction1D::operator()(double x) const { return lerp_at(values_, grid_, x, ext_); }

double GridFunction1D::cubic(double x) const {
  const double fx = grid_.index_of(x);
  const double last = static_cast<double>(grid_.n - 1);
  if (fx < 0.0 || fx > last) {
    if (ext_ == Extension::Zero) return 0.0;
    return fx < 0.0 ? values_.front() : values_.back();
  }
  const auto i = std::clamp(static_cast<std::size_t>(fx), std::size_t{1}, grid_.n - 3);
  const double t = fx - static_cast<double>(i);
  const double lm = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double l0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double l1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double l2 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return lm * values_[i - 1] + l0 * values_[i] + l1 * values_[i + 1] + l2 * values_[i + 2];
}

GridFunction1D GridFunction1D::sample(UniformGrid grid, const std::function<double(double)>& fn,
                                      Extension ext) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) v[i] = fn(grid.at(i));
  return GridFunction1D(grid, std::move(v), ext);
}

// --- GridDensity1D / 2D -----------------------------------------------------

GridDensity1D GridDensity1D::from_values(ReferenceMeasure r, UniformGrid grid,
                                         std::vector<double> values) {
  check_density_grid(grid);
  if (values.size() != grid.n) {
    throw Error(ErrorKind::InvalidGrid, fmt::format("{} values for {} grid points", values.size(), grid.n));
  }
  sanitize(values);
  const auto w = quadrature_weights(r, grid);
  const double mass = weighted_sum(w, values);
  const Normalization n = normalize(values, mass, kSilentDeviation1D);
  return GridDensity1D(r, GridFunction1D(grid, std::move(values), natural_extension(r)), n);
}

GridDensity2D GridDensity2D::from_values(ReferenceMeasure r, UniformGrid grid,
                                         std::vector<double> values) {
  check_density_grid(grid);
  if (values.size() != grid.n * grid.n) {
    throw Error(ErrorKind::InvalidGrid,
                fmt::format("{} values for a {}x{} grid", values.size(), grid.n, grid.n));
  }
  sanitize(values);
  const double mass = mass_2d(r, grid, values);
  const Normalization n = normalize(values, mass, kSilentDeviation2D);
  return GridDensity2D(r, grid, std::move(values), n);
}

double GridDensity2D::operator()(double x, double y) const {
  double fx = grid_.index_of(x);
  double fy = grid_.index_of(y);
  const double last = static_cast<double>(grid_.n - 1);
  if (fx < 0.0 || fx > last || fy < 0.0 || fy > last) {
    if (reference_ == ReferenceMeasure::Lebesgue) return 0.0;
    fx = std::clamp(fx, 0.0, last);
    fy = std::clamp(fy, 0.0, last);
  }
  const auto ix = std::min(static_cast<std::size_t>(fx), grid_.n - 2);
  const auto iy = std::min(static_cast<std::size_t>(fy), grid_.n - 2);
  const double a = fx - static_cast<double>(ix);
  const double b = fy - static_cast<double>(iy);
  const double lower = (1.0 - a) * at(ix, iy) + a * at(ix + 1, iy);
  const double upper = (1.0 - a) * at(ix, iy + 1) + a * at(ix + 1, iy + 1);
  return (1.0 - b) * lower + b * upper;
}

GridDensity1D sample_density(ReferenceMeasure r, const UniformGrid& grid,
                             const std::function<double(double)>& law_log_pdf) {
  std::vector<double> v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    v[i] = std::exp(law_log_pdf(x) - log_reference_weight(r, x));
  }
  return GridDensity1D::from_values(r, grid, std::move(v));
}

GridDensity2D sample_density_2d(ReferenceMeasure r, const UniformGrid& grid,
                                const std::function<double(double, double)>& law_log_pdf) {
  std::vector<double> v(grid.n * grid.n);
  for (std::size_t iy = 0; iy < grid.n; ++iy) {
    const double y = grid.at(iy);
    for (std::size_t ix = 0; ix < grid.n; ++ix) {
      const double x = grid.at(ix);
      v[iy * grid.n + ix] =
          std::exp(law_log_pdf(x, y) - log_reference_weight(r, x) - log_reference_weight(r, y));
    }
  }
  return GridDensity2D::from_values(r, grid, std::move(v));
}

// --- GaussianDensity --------------------------------------------------------

GaussianDensity GaussianDensity::make1d(ReferenceMeasure r, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw Error(ErrorKind::NotSPD, fmt::format("variance {} is not positive", variance));
  }
  return GaussianDensity(r, 1, {mean, 0.0}, {variance, 0.0, 0.0, 0.0});
}

GaussianDensity GaussianDensity::make2d(ReferenceMeasure r, Vec2 mean, Mat2 cov) {
  const double scale = std::max(std::abs(cov.a11), std::abs(cov.a22));
  if (std::abs(cov.a12 - cov.a21) > 1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorKind::NotSPD, "covariance is not symmetric");
  }
  if (!(cov.a11 > 0.0) || !(cov.det() > 0.0) || !std::isfinite(cov.det())) {
    throw Error(ErrorKind::NotSPD, "covariance is not positive definite");
  }
  return GaussianDensity(r, 2, mean, cov);
}

double GaussianDensity::law_log_pdf(double x) const {
  const double d = x - mean_.x;
  return -0.5 * d * d / cov_.a11 - 0.5 * std::log(cov_.a11) - kLogSqrt2Pi;
}

double GaussianDensity::law_log_pdf(double x, double y) const {
  const Mat2 inv = cov_.inverse();
  const Vec2 d{x - mean_.x, y - mean_.y};
  const double q = dot(d, inv * d);
  return -0.5 * q - 0.5 * std::log(cov_.det()) - 2.0 * kLogSqrt2Pi;
}

double GaussianDensity::operator()(double x) const {
  return std::exp(law_log_pdf(x) - log_reference_weight(reference_, x));
}

double GaussianDensity::operator()(double x, double y) const {
  return std::exp(law_log_pdf(x, y) - log_reference_weight(reference_, x) -
                  log_reference_weight(reference_, y));
}

GridDensity1D GaussianDensity::to_grid(const UniformGrid& grid) const {
  if (dim_ != 1) throw Error(ErrorKind::InvalidArgument, "to_grid needs a 1D Gaussian");
  return sample_density(reference_, grid, [this](double x) { return law_log_pdf(x); });
}

GridDensity2D GaussianDensity::to_grid_2d(const UniformGrid& grid) const {
  if (dim_ != 2) throw Error(ErrorKind::InvalidArgument, "to_grid_2d needs a 2D Gaussian");
  const Mat2 inv = cov_.inverse();
  const double lognorm = -0.5 * std::log(cov_.det()) - 2.0 * kLogSqrt2Pi;
  return sample_density_2d(reference_, grid, [&](double x, double y) {
    const Vec2 d{x - mean_.x, y - mean_.y};
    return -0.5 * dot(d, inv * d) + lognorm;
  });
}

GaussianDensity GaussianDensity::marginal(Direction d) const {
  if (dim_ != 2) throw Error(ErrorKind::InvalidArgument, "marginal needs a 2D Gaussian");
  const Vec2 u = d.unit_vector();
  return make1d(reference_, dot(u, mean_), dot(u, cov_ * u));
}

// --- operations -------------------------------------------------------------

GridDensity1D marginal(const GridDensity2D& f, Direction d, std::optional<UniformGrid> out) {
  const UniformGrid& g = f.grid();
  const UniformGrid og = out.value_or(g);
  const ReferenceMeasure ref = f.reference();
  const double h = g.step;
  const Vec2 u = d.unit_vector();
  const Vec2 v{-u.y, u.x};

  // s-grid: the whole square for Lebesgue, [-L, L] under the Gaussian weight.
  const double reach = std::max(std::abs(g.lo), std::abs(g.hi())) *
                       (ref == ReferenceMeasure::Lebesgue ? std::numbers::sqrt2 : 1.0);
  const auto m = static_cast<long>(std::ceil(reach / h));
  const auto ns = static_cast<std::size_t>(2 * m + 1);
  auto w = simpson_weights(ns, h);
  if (ref == ReferenceMeasure::StandardGaussian) {
    for (std::size_t k = 0; k < ns; ++k) w[k] *= normal_pdf(static_cast<double>(static_cast<long>(k) - m) * h);
  }

  const auto& kern = simd::kernels();
  const double last = static_cast<double>(g.n - 1);
  const double mh = static_cast<double>(m) * h;
  std::vector<double> raw(og.n, 0.0);
  for (std::size_t i = 0; i < og.n; ++i) {
    const double t = og.at(i);
    const double ax = (t * u.x - mh * v.x - g.lo) / h;
    const double ay = (t * u.y - mh * v.y - g.lo) / h;
    const auto kx = inside_range(ax, v.x, last, static_cast<long>(ns) - 1);
    const auto ky = inside_range(ay, v.y, last, static_cast<long>(ns) - 1);
    long klo = 1, khi = 0;
    if (kx && ky) {
      klo = std::max(kx->first, ky->first);
      khi = std::min(kx->second, ky->second);
    }
    double sum = 0.0;
    if (klo <= khi) {
      const auto kl = static_cast<std::size_t>(klo);
      sum = kern.bicubic_line(f.values().data(), g.n, g.n, ax + static_cast<double>(klo) * v.x,
                               ay + static_cast<double>(klo) * v.y, v.x, v.y, w.data() + kl,
                               static_cast<std::size_t>(khi - klo + 1));
    }
    if (ref == ReferenceMeasure::StandardGaussian) {
      for (long k = 0; k < static_cast<long>(ns); ++k) {
        if (k >= klo && k <= khi) continue;
        const double s = static_cast<double>(k - m) * h;
        sum += w[static_cast<std::size_t>(k)] * f(t * u.x + s * v.x, t * u.y + s * v.y);
      }
    }
    // The cubic interpolant can dip slightly below zero in the far tails.
    raw[i] = std::max(sum, 0.0);
  }

  const double mass = weighted_sum(quadrature_weights(ref, og), raw);
  if (mass < 1.0 - kTruncationTol) {
    throw Error(ErrorKind::DomainTruncation,
                fmt::format("marginal along theta = {:.6f} keeps only {:.8f} of the mass",
                            d.theta(), mass));
  }
  return GridDensity1D::from_values(ref, og, std::move(raw));
}

GridDensity1D convolve(const GridDensity1D& f, const GridDensity1D& g, ConvolutionMethod method) {
  if (f.reference() != ReferenceMeasure::Lebesgue || g.reference() != ReferenceMeasure::Lebesgue) {
    throw Error(ErrorKind::ReferenceMismatch, "convolution needs Lebesgue-reference densities");
  }
  const GridFunction1D c = convolve(f.function(), g.function(), method);
  return GridDensity1D::from_values(ReferenceMeasure::Lebesgue, c.grid(),
                                    std::vector<double>(c.values().begin(), c.values().end()));
}

GridFunction1D convolve(const GridFunction1D& f, const GridFunction1D& g, ConvolutionMethod method) {
  const double h = f.grid().step;
  if (std::abs(g.grid().step - h) > 1e-12 * h) {
    throw Error(ErrorKind::InvalidGrid, "convolution needs equal grid steps");
  }
  auto values = convolve_samples(f.values(), g.values(), h, method);
  UniformGrid grid{f.grid().lo + g.grid().lo, h, values.size()};
  return GridFunction1D(grid, std::move(values), Extension::Zero);
}

GridDensity2D affine_pushforward(const GridDensity2D& f, const Mat2& a) {
  if (f.reference() != ReferenceMeasure::Lebesgue) {
    throw Error(ErrorKind::ReferenceMismatch, "affine pushforward needs a Lebesgue-reference density");
  }
  const double det = a.det();
  if (!(std::abs(det) > 1e-12)) throw Error(ErrorKind::Singular, "pushforward matrix is singular");
  const Mat2 inv = a.inverse();
  const UniformGrid& g = f.grid();
  const auto& kern = simd::kernels();
  const double last = static_cast<double>(g.n - 1);
  const double one = 1.0;
  std::vector<double> v(g.n * g.n);
  for (std::size_t iy = 0; iy < g.n; ++iy) {
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const Vec2 p = inv * Vec2{g.at(ix), g.at(iy)};
      const double fx = g.index_of(p.x), fy = g.index_of(p.y);
      if (fx < 0.0 || fx > last || fy < 0.0 || fy > last) continue;
      const double val = kern.bicubic_line(f.values().data(), g.n, g.n, fx, fy, 0.0, 0.0, &one, 1);
      v[iy * g.n + ix] = std::max(val, 0.0) / std::abs(det);
    }
  }
  return GridDensity2D::from_values(ReferenceMeasure::Lebesgue, g, std::move(v));
}

GridDensity1D scale1d(const GridDensity1D& f, double a) {
  if (a == 0.0 || !std::isfinite(a)) throw Error(ErrorKind::ZeroScale, "scale factor must be nonzero");
  if (f.reference() != ReferenceMeasure::Lebesgue) {
    throw Error(ErrorKind::ReferenceMismatch, "scaling needs a Lebesgue-reference density");
  }
  const UniformGrid& g = f.grid();
  std::vector<double> v(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    v[i] = std::max(0.0, f.function().cubic(g.at(i) / a)) / std::abs(a);
  }
  return GridDensity1D::from_values(ReferenceMeasure::Lebesgue, g, std::move(v));
}

GridDensity2D independent_product(const GridDensity1D& g, const GridDensity1D& h) {
  if (g.reference() != h.reference()) {
    throw Error(ErrorKind::ReferenceMismatch, "factors have different reference measures");
  }
  if (!(g.grid() == h.grid())) throw Error(ErrorKind::InvalidGrid, "factors live on different grids");
  const std::size_t n = g.grid().n;
  std::vector<double> v(n * n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) v[iy * n + ix] = g.values()[ix] * h.values()[iy];
  }
  return GridDensity2D::from_values(g.reference(), g.grid(), std::move(v));
}

GridDensity1D linear_combination_density(const GridDensity1D& g, const GridDensity1D& h, double a,
                                         double b) {
  if (g.reference() != ReferenceMeasure::Lebesgue || h.reference() != ReferenceMeasure::Lebesgue) {
    throw Error(ErrorKind::ReferenceMismatch, "linear combinations need Lebesgue-reference densities");
  }
  if (a == 0.0 && b == 0.0) throw Error(ErrorKind::ZeroScale, "both coefficients vanish");
  const double step = g.grid().step;
  const double half = std::max({std::abs(g.grid().lo), std::abs(g.grid().hi()),
                                std::abs(h.grid().lo), std::abs(h.grid().hi())});
  const auto m = static_cast<std::size_t>(std::ceil((std::abs(a) + std::abs(b)) * half / step));
  const UniformGrid out{-static_cast<double>(m) * step, step, 2 * m + 1};

  // Integrate over the variable whose coefficient is smaller.
  const bool over_y = std::abs(b) <= std::abs(a);
  const GridDensity1D& inner = over_y ? h : g;
  const GridDensity1D& outer = over_y ? g : h;
  const double c_outer = over_y ? a : b;
  const double c_inner = over_y ? b : a;
  const auto w = simpson_weights(inner.grid().n, inner.grid().step);
  std::vector<double> v(out.n);
  std::vector<double> terms(inner.grid().n);
  for (std::size_t i = 0; i < out.n; ++i) {
    const double z = out.at(i);
    for (std::size_t k = 0; k < inner.grid().n; ++k) {
      const double y = inner.grid().at(k);
      terms[k] = inner.values()[k] == 0.0
                     ? 0.0
                     : inner.values()[k] * std::max(0.0, outer.function().cubic((z - c_inner * y) / c_outer));
    }
    v[i] = weighted_sum(w, terms) / std::abs(c_outer);
  }
  return GridDensity1D::from_values(ReferenceMeasure::Lebesgue, out, std::move(v));
}

}  // namespace entroframe
