#pragma once

// Probability densities on R and R^2 relative to Lebesgue measure or to the
// standard Gaussian measure, sampled on uniform grids or given in closed form.
//
// A grid density is stored as its values f(x_i) with respect to its reference
// measure mu, so that int f dmu = 1 under Simpson quadrature. Off-grid values
// come from linear (1D) or bilinear (2D) interpolation; marginals use bicubic
// line sums. Outside the grid a
// Lebesgue density is zero; a Gaussian-reference density is extended by its
// boundary value, since f itself need not decay (f = 1 is the reference law).

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "entroframe/frame2.hpp"
#include "entroframe/quadrature.hpp"

namespace entroframe {

enum class ReferenceMeasure { Lebesgue, StandardGaussian };

std::string_view to_string(ReferenceMeasure r) noexcept;

/// log of the reference density at x (per coordinate): 0 or log phi(x).
double log_reference_weight(ReferenceMeasure r, double x);
double reference_weight(ReferenceMeasure r, double x);

/// Simpson weights times the reference density, for integrals against mu.
std::vector<double> quadrature_weights(ReferenceMeasure r, const UniformGrid& grid);

enum class Extension { Zero, Clamp };

constexpr Extension natural_extension(ReferenceMeasure r) {
  return r == ReferenceMeasure::Lebesgue ? Extension::Zero : Extension::Clamp;
}

/// Sampled real function on a uniform grid (not necessarily a density).
class GridFunction1D {
 public:
  GridFunction1D(UniformGrid grid, std::vector<double> values, Extension ext = Extension::Zero);

  const UniformGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  Extension extension() const noexcept { return ext_; }

  /// Linear interpolation.
  double operator()(double x) const;
  /// Four-point Lagrange interpolation (second-order accurate near the ends).
  double cubic(double x) const;

  static GridFunction1D sample(UniformGrid grid, const std::function<double(double)>& fn,
                               Extension ext = Extension::Zero);

 private:
  UniformGrid grid_;
  std::vector<double> values_;
  Extension ext_;
};

/// Renormalization applied when a density was constructed.
struct Normalization {
  double mass = 1.0;    ///< quadrature mass before renormalization
  double factor = 1.0;  ///< values were multiplied by this
  bool warned = false;  ///< |mass - 1| exceeded the silent threshold
};

class GridDensity1D {
 public:
  /// Validates (finite, nonnegative, odd point count >= 65) and renormalizes.
  /// Masses off by more than 1e-2 are rejected; more than 1e-6 sets the
  /// warning flag.
  static GridDensity1D from_values(ReferenceMeasure r, UniformGrid grid, std::vector<double> values);

  ReferenceMeasure reference() const noexcept { return reference_; }
  const UniformGrid& grid() const noexcept { return fn_.grid(); }
  std::span<const double> values() const noexcept { return fn_.values(); }
  const GridFunction1D& function() const noexcept { return fn_; }
  const Normalization& normalization() const noexcept { return norm_; }

  double operator()(double x) const { return fn_(x); }

 private:
  GridDensity1D(ReferenceMeasure r, GridFunction1D fn, Normalization n)
      : reference_(r), fn_(std::move(fn)), norm_(n) {}

  ReferenceMeasure reference_;
  GridFunction1D fn_;
  Normalization norm_;
};

/// Density on the square grid x grid; values are row-major with x fastest.
class GridDensity2D {
 public:
  static GridDensity2D from_values(ReferenceMeasure r, UniformGrid grid, std::vector<double> values);

  ReferenceMeasure reference() const noexcept { return reference_; }
  const UniformGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const Normalization& normalization() const noexcept { return norm_; }

  double at(std::size_t ix, std::size_t iy) const { return values_[iy * grid_.n + ix]; }
  /// Bilinear interpolation with the reference's natural extension.
  double operator()(double x, double y) const;

 private:
  GridDensity2D(ReferenceMeasure r, UniformGrid g, std::vector<double> v, Normalization n)
      : reference_(r), grid_(g), values_(std::move(v)), norm_(n) {}

  ReferenceMeasure reference_;
  UniformGrid grid_;
  std::vector<double> values_;
  Normalization norm_;
};

/// Samples exp(log_pdf(x) - log ref(x)), i.e. the density w.r.t. the reference
/// of a law given by its Lebesgue log-density.
GridDensity1D sample_density(ReferenceMeasure r, const UniformGrid& grid,
                             const std::function<double(double)>& law_log_pdf);
GridDensity2D sample_density_2d(ReferenceMeasure r, const UniformGrid& grid,
                                const std::function<double(double, double)>& law_log_pdf);

/// Gaussian law N(mean, covariance) seen as a density w.r.t. its reference.
class GaussianDensity {
 public:
  static GaussianDensity make1d(ReferenceMeasure r, double mean, double variance);
  static GaussianDensity make2d(ReferenceMeasure r, Vec2 mean, Mat2 covariance);

  ReferenceMeasure reference() const noexcept { return reference_; }
  int dimension() const noexcept { return dim_; }
  Vec2 mean() const noexcept { return mean_; }
  Mat2 covariance() const noexcept { return cov_; }
  double mean1d() const noexcept { return mean_.x; }
  double variance1d() const noexcept { return cov_.a11; }

  double law_log_pdf(double x) const;
  double law_log_pdf(double x, double y) const;
  /// Density w.r.t. the reference measure.
  double operator()(double x) const;
  double operator()(double x, double y) const;

  GridDensity1D to_grid(const UniformGrid& grid) const;
  GridDensity2D to_grid_2d(const UniformGrid& grid) const;

  /// Law of X.u: N(m.u, u^T S u).
  GaussianDensity marginal(Direction d) const;

 private:
  GaussianDensity(ReferenceMeasure r, int dim, Vec2 m, Mat2 c) : reference_(r), dim_(dim), mean_(m), cov_(c) {}

  ReferenceMeasure reference_;
  int dim_;
  Vec2 mean_;
  Mat2 cov_;
};

/// f_(u): image of f dmu_2 under x -> x.u, as a density w.r.t. mu_1. The line
/// integral runs over s with weight 1 (Lebesgue) or phi(s) (Gaussian), on
/// bicubic interpolants of the grid values. Output
/// grid defaults to the input axis grid. Throws DomainTruncation if more than
/// 1e-4 of the mass is lost.
GridDensity1D marginal(const GridDensity2D& f, Direction d,
                       std::optional<UniformGrid> out = std::nullopt);

enum class ConvolutionMethod { Direct, Fft };

/// Full discrete convolution step * sum_j f[j] g[i-j], length nf + ng - 1.
std::vector<double> convolve_samples(std::span<const double> f, std::span<const double> g,
                                     double step, ConvolutionMethod method = ConvolutionMethod::Direct);

/// (f*g) on the grid starting at lo_f + lo_g with the common step. Both must
/// be Lebesgue densities with equal steps.
GridDensity1D convolve(const GridDensity1D& f, const GridDensity1D& g,
                       ConvolutionMethod method = ConvolutionMethod::Direct);
GridFunction1D convolve(const GridFunction1D& f, const GridFunction1D& g,
                        ConvolutionMethod method = ConvolutionMethod::Direct);

/// Law of A(X, Y): x -> f(A^{-1} x) / |det A| on the same grid (Lebesgue only),
/// resampled with bicubic interpolation and clamped at zero.
GridDensity2D affine_pushforward(const GridDensity2D& f, const Mat2& a);

/// Law of aX: t -> f(t / a) / |a| on the same grid (Lebesgue only), with
/// cubic interpolation.
GridDensity1D scale1d(const GridDensity1D& f, double a);

/// f(x, y) = g(x) h(y); both factors must share reference and grid.
GridDensity2D independent_product(const GridDensity1D& g, const GridDensity1D& h);

/// Law of aX + bY for independent X ~ g, Y ~ h (Lebesgue). The integral runs
/// over the variable with the smaller coefficient so that it stays resolved
/// on the grid when that coefficient is tiny; the other density is evaluated
/// by cubic interpolation. Output grid has the step of g and covers
/// (|a| + |b|) times its half width.
GridDensity1D linear_combination_density(const GridDensity1D& g, const GridDensity1D& h, double a,
                                         double b);

}  // namespace entroframe
