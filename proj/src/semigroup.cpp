#include "entroframe/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/functional.hpp"
#include "entroframe/simd/kernels.hpp"

namespace entroframe {

namespace {

constexpr double kTruncationSigmas = 8.0;
constexpr std::size_t kHermiteNodes = 64;
// Kernel-sum terms further than this many standard deviations are dropped.
constexpr double kMehlerReach = 12.0;
// n * kernel length above which the default heat flow switches to the FFT.
constexpr double kDirectBudget = 1 << 24;

std::vector<double> heat_kernel(double t, double h) {
  const double sigma = std::sqrt(2.0 * t);
  const auto m = static_cast<std::size_t>(std::ceil(kTruncationSigmas * sigma / h));
  std::vector<double> k(2 * m + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double x = (static_cast<double>(i) - static_cast<double>(m)) * h / sigma;
    k[i] = std::exp(-0.5 * x * x);
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

ConvolutionMethod pick(std::optional<ConvolutionMethod> method, std::size_t n, std::size_t klen) {
  if (method) return *method;
  return static_cast<double>(n) * static_cast<double>(klen) > kDirectBudget ? ConvolutionMethod::Fft
                                                                            : ConvolutionMethod::Direct;
}

// Same-size smoothing of one line with a symmetric kernel.
void smooth_line(std::span<const double> in, std::span<const double> kernel, ConvolutionMethod method,
                 double* out, std::size_t stride) {
  const std::size_t m = kernel.size() / 2;
  const auto full = convolve_samples(in, kernel, 1.0, method);
  for (std::size_t i = 0; i < in.size(); ++i) out[i * stride] = full[i + m];
}

void require_reference(ReferenceMeasure have, ReferenceMeasure want, const char* what) {
  if (have != want) {
    throw Error(ErrorKind::ReferenceMismatch,
                fmt::format("{} needs a {}-reference density", what, to_string(want)));
  }
}

// Row i of the OU operator on the grid: out_i = sum_j M_ij f_j + left f_0 +
// right f_{n-1}. The Gaussian kernel is summed on the uniform lattice
// extended past the grid, where the clamp extension repeats the end values;
// a plain lattice sum of a well-resolved Gaussian has spectral accuracy,
// unlike a sum cut at the grid ends. Stored as band [lo, lo + weights.size()).
struct MehlerRow {
  std::size_t lo = 0;
  std::vector<double> weights;
  double left = 0.0, right = 0.0;
};

std::vector<MehlerRow> mehler_rows(const UniformGrid& g, double c, double s) {
  const auto last = static_cast<long>(g.n - 1);
  std::vector<MehlerRow> rows(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double centre = c * g.at(i);
    const auto a = static_cast<long>(std::floor(g.index_of(centre - kMehlerReach * s)));
    const auto b = static_cast<long>(std::ceil(g.index_of(centre + kMehlerReach * s)));
    MehlerRow& row = rows[i];
    const long lo = std::clamp(a, 0L, last), hi = std::clamp(b, 0L, last);
    row.lo = static_cast<std::size_t>(lo);
    row.weights.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (long j = a; j <= b; ++j) {
      const double x = g.lo + static_cast<double>(j) * g.step;
      const double w = g.step * normal_pdf((x - centre) / s) / s;
      if (j < 0) {
        row.left += w;
      } else if (j > last) {
        row.right += w;
      } else {
        row.weights[static_cast<std::size_t>(j - lo)] = w;
      }
    }
  }
  return rows;
}

double apply_row(const MehlerRow& row, const double* f, std::size_t stride, std::size_t n) {
  double sum = row.left * f[0] + row.right * f[(n - 1) * stride];
  if (stride == 1) {
    return sum + simd::kernels().dot(row.weights.data(), f + row.lo, row.weights.size());
  }
  for (std::size_t k = 0; k < row.weights.size(); ++k) sum += row.weights[k] * f[(row.lo + k) * stride];
  return sum;
}

bool mehler_resolved(const UniformGrid& g, double s) { return s >= 2.0 * g.step; }

}  // namespace

// --- FlowTime ---------------------------------------------------------------

FlowTime::FlowTime(double t) : t_(t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, fmt::format("flow time {} is negative", t));
}

FlowTime FlowTime::from_theta(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("theta {} is outside [0, pi/2]", theta));
  }
  // cos(pi/2) rounds to 6e-17 rather than 0.
  if (theta >= std::numbers::pi / 2.0 - 1e-15) return FlowTime(std::numeric_limits<double>::infinity());
  return FlowTime(-std::log(std::cos(theta)));
}

double FlowTime::theta() const { return std::acos(contraction()); }

double FlowTime::contraction() const { return std::exp(-t_); }

// --- heat -------------------------------------------------------------------

GridDensity1D heat_flow(const GridDensity1D& f, FlowTime t, std::optional<ConvolutionMethod> method) {
  require_reference(f.reference(), ReferenceMeasure::Lebesgue, "heat flow");
  if (!std::isfinite(t.t())) throw Error(ErrorKind::InvalidArgument, "heat flow time must be finite");
  if (t.t() == 0.0) return f;
  const auto kernel = heat_kernel(t.t(), f.grid().step);
  std::vector<double> out(f.grid().n);
  smooth_line(f.values(), kernel, pick(method, out.size(), kernel.size()), out.data(), 1);
  return GridDensity1D::from_values(ReferenceMeasure::Lebesgue, f.grid(), std::move(out));
}

GridDensity2D heat_flow(const GridDensity2D& f, FlowTime t, std::optional<ConvolutionMethod> method) {
  require_reference(f.reference(), ReferenceMeasure::Lebesgue, "heat flow");
  if (!std::isfinite(t.t())) throw Error(ErrorKind::InvalidArgument, "heat flow time must be finite");
  if (t.t() == 0.0) return f;
  const std::size_t n = f.grid().n;
  const auto kernel = heat_kernel(t.t(), f.grid().step);
  const ConvolutionMethod m = pick(method, n * n, kernel.size());
  std::vector<double> tmp(n * n), out(n * n), line(n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    smooth_line(f.values().subspan(iy * n, n), kernel, m, tmp.data() + iy * n, 1);
  }
  for (std::size_t ix = 0; ix < n; ++ix) {
    for (std::size_t iy = 0; iy < n; ++iy) line[iy] = tmp[iy * n + ix];
    smooth_line(line, kernel, m, out.data() + ix, n);
  }
  return GridDensity2D::from_values(ReferenceMeasure::Lebesgue, f.grid(), std::move(out));
}

GaussianDensity heat_flow(const GaussianDensity& f, FlowTime t) {
  require_reference(f.reference(), ReferenceMeasure::Lebesgue, "heat flow");
  const double a = 2.0 * t.t();
  if (f.dimension() == 1) return GaussianDensity::make1d(f.reference(), f.mean1d(), f.variance1d() + a);
  Mat2 c = f.covariance();
  c.a11 += a;
  c.a22 += a;
  return GaussianDensity::make2d(f.reference(), f.mean(), c);
}

// --- Ornstein-Uhlenbeck ------------------------------------------------------

GridFunction1D hermite_p_theta(const GridFunction1D& f, double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("theta {} is outside [0, pi/2]", theta));
  }
  if (theta == 0.0) return f;
  return hermite_p_theta([&f](double x) { return f.cubic(x); }, theta, f.grid());
}

GridFunction1D hermite_p_theta(const std::function<double(double)>& f, double theta,
                               const UniformGrid& grid) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("theta {} is outside [0, pi/2]", theta));
  }
  const auto& rule = gauss_hermite(kHermiteNodes);
  const double c = std::cos(theta), s = std::sin(theta);
  std::vector<double> out(grid.n), terms(rule.nodes.size());
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = c * grid.at(i);
    for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = f(x + s * rule.nodes[k]);
    out[i] = weighted_sum(rule.weights, terms);
  }
  return GridFunction1D(grid, std::move(out), Extension::Clamp);
}

GridFunction1D ou_flow(const GridFunction1D& f, FlowTime t) {
  if (t.t() == 0.0) return f;
  const UniformGrid& g = f.grid();
  const double c = t.contraction();
  const double s = std::sqrt(-std::expm1(-2.0 * t.t()));
  if (!mehler_resolved(g, s)) return hermite_p_theta(f, t.theta());
  const auto rows = mehler_rows(g, c, s);
  std::vector<double> out(g.n);
  for (std::size_t i = 0; i < g.n; ++i) out[i] = apply_row(rows[i], f.values().data(), 1, g.n);
  return GridFunction1D(g, std::move(out), Extension::Clamp);
}

GridDensity1D ou_flow(const GridDensity1D& f, FlowTime t) {
  require_reference(f.reference(), ReferenceMeasure::StandardGaussian, "OU flow");
  if (t.t() == 0.0) return f;
  const GridFunction1D out = ou_flow(f.function(), t);
  return GridDensity1D::from_values(ReferenceMeasure::StandardGaussian, out.grid(),
                                    std::vector<double>(out.values().begin(), out.values().end()));
}

GridDensity2D ou_flow(const GridDensity2D& f, FlowTime t) {
  require_reference(f.reference(), ReferenceMeasure::StandardGaussian, "OU flow");
  if (t.t() == 0.0) return f;
  const UniformGrid& g = f.grid();
  const std::size_t n = g.n;
  const double c = t.contraction();
  const double s = std::sqrt(-std::expm1(-2.0 * t.t()));
  std::vector<double> tmp(n * n), out(n * n);
  if (mehler_resolved(g, s)) {
    const auto rows = mehler_rows(g, c, s);
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) tmp[iy * n + ix] = apply_row(rows[ix], f.values().data() + iy * n, 1, n);
    }
    for (std::size_t ix = 0; ix < n; ++ix) {
      for (std::size_t iy = 0; iy < n; ++iy) out[iy * n + ix] = apply_row(rows[iy], tmp.data() + ix, n, n);
    }
  } else {
    const double theta = t.theta();
    std::vector<double> line(n);
    for (std::size_t iy = 0; iy < n; ++iy) {
      GridFunction1D row(g, std::vector<double>(f.values().begin() + static_cast<std::ptrdiff_t>(iy * n),
                                                f.values().begin() + static_cast<std::ptrdiff_t>((iy + 1) * n)),
                         Extension::Clamp);
      const auto r = hermite_p_theta(row, theta);
      std::copy(r.values().begin(), r.values().end(), tmp.begin() + static_cast<std::ptrdiff_t>(iy * n));
    }
    for (std::size_t ix = 0; ix < n; ++ix) {
      for (std::size_t iy = 0; iy < n; ++iy) line[iy] = tmp[iy * n + ix];
      const auto r = hermite_p_theta(GridFunction1D(g, line, Extension::Clamp), theta);
      for (std::size_t iy = 0; iy < n; ++iy) out[iy * n + ix] = r.values()[iy];
    }
  }
  return GridDensity2D::from_values(ReferenceMeasure::StandardGaussian, g, std::move(out));
}

GaussianDensity ou_flow(const GaussianDensity& f, FlowTime t) {
  require_reference(f.reference(), ReferenceMeasure::StandardGaussian, "OU flow");
  const double c = t.contraction();
  const double noise = -std::expm1(-2.0 * t.t());
  if (f.dimension() == 1) {
    return GaussianDensity::make1d(f.reference(), c * f.mean1d(), c * c * f.variance1d() + noise);
  }
  const Mat2 s = f.covariance();
  const Mat2 cov{c * c * s.a11 + noise, c * c * s.a12, c * c * s.a21, c * c * s.a22 + noise};
  return GaussianDensity::make2d(f.reference(), {c * f.mean().x, c * f.mean().y}, cov);
}

// --- checks -----------------------------------------------------------------

namespace {

void check_step(FlowTime t, double h) {
  if (!(h > 0.0) || !(t.t() >= h) || !std::isfinite(t.t())) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("de Bruijn check needs t >= h > 0 (t = {}, h = {})", t.t(), h));
  }
}

}  // namespace

DeBruijnResult de_bruijn_check(const GridDensity1D& f, FlowTime t, double h) {
  check_step(t, h);
  const bool heat = f.reference() == ReferenceMeasure::Lebesgue;
  auto flow = [&](double time) { return heat ? heat_flow(f, FlowTime(time)) : ou_flow(f, FlowTime(time)); };
  const double plus = entropy(flow(t.t() + h)).value;
  const double minus = entropy(flow(t.t() - h)).value;
  DeBruijnResult r;
  r.dsdt = (plus - minus) / (2.0 * h);
  r.fisher = fisher(flow(t.t())).value;
  r.residual = std::abs(r.dsdt + r.fisher);
  return r;
}

DeBruijnResult de_bruijn_check(const GaussianDensity& f, FlowTime t, double h) {
  check_step(t, h);
  const bool heat = f.reference() == ReferenceMeasure::Lebesgue;
  auto flow = [&](double time) { return heat ? heat_flow(f, FlowTime(time)) : ou_flow(f, FlowTime(time)); };
  DeBruijnResult r;
  r.dsdt = (entropy(flow(t.t() + h)).value - entropy(flow(t.t() - h)).value) / (2.0 * h);
  r.fisher = fisher(flow(t.t())).value;
  r.residual = std::abs(r.dsdt + r.fisher);
  return r;
}

double stability_check(const GridDensity2D& f, Direction d, FlowTime t) {
  const bool heat = f.reference() == ReferenceMeasure::Lebesgue;
  const GridDensity1D a = marginal(heat ? heat_flow(f, t) : ou_flow(f, t), d);
  const GridDensity1D m = marginal(f, d);
  const GridDensity1D b = heat ? heat_flow(m, t) : ou_flow(m, t);
  double err = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) err = std::max(err, std::abs(a.values()[i] - b.values()[i]));
  return err;
}

}  // namespace entroframe
