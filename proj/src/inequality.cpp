#include "entroframe/inequality.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"
#include "entroframe/functional.hpp"
#include "entroframe/semigroup.hpp"

namespace entroframe {

namespace {

constexpr double kPi = std::numbers::pi;

std::string grid_digest(const UniformGrid& g) {
  return fmt::format("grid=[{:.6g},{:.6g}]x{}", g.lo, g.hi(), g.n);
}

std::string frame_digest(const Frame2& f) {
  return fmt::format("frame theta=({:.6f},{:.6f},{:.6f}) c=({:.6f},{:.6f},{:.6f})",
                     f.direction(0).theta(), f.direction(1).theta(), f.direction(2).theta(),
                     f.weight(0), f.weight(1), f.weight(2));
}

std::string gaussian_digest(const GaussianDensity& g) {
  if (g.dimension() == 1) {
    return fmt::format("N({:.6g},{:.6g})/{}", g.mean1d(), g.variance1d(), to_string(g.reference()));
  }
  const Mat2 c = g.covariance();
  return fmt::format("N(({:.6g},{:.6g}),[[{:.6g},{:.6g}],[{:.6g},{:.6g}]])/{}", g.mean().x, g.mean().y,
                     c.a11, c.a12, c.a21, c.a22, to_string(g.reference()));
}

void require(ReferenceMeasure have, ReferenceMeasure want, const char* what) {
  if (have != want) {
    throw Error(ErrorKind::ReferenceMismatch,
                fmt::format("{} needs {}-reference inputs", what, to_string(want)));
  }
}

void require_dimension(const GaussianDensity& g, int dim) {
  if (g.dimension() != dim) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("expected a {}D Gaussian", dim));
  }
}

void require_exponent(double v, const char* name) {
  if (!(v > 1.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidExponents, fmt::format("{} = {} must be > 1", name, v));
  }
}

// ||x -> int a(ca x + sa y) b(cb x + sb y) dmu(y)||_{L^e(mu)} on the grid.
double nested_norm(const GridFunction1D& a, double ca, double sa, const GridFunction1D& b, double cb,
                   double sb, ReferenceMeasure r, const UniformGrid& grid, double exponent) {
  const auto w = quadrature_weights(r, grid);
  std::vector<double> inner(grid.n), outer(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.at(i);
    for (std::size_t k = 0; k < grid.n; ++k) {
      const double y = grid.at(k);
      inner[k] = w[k] == 0.0 ? 0.0 : a.cubic(ca * x + sa * y) * b.cubic(cb * x + sb * y);
    }
    outer[i] = std::pow(std::abs(weighted_sum(w, inner)), exponent);
  }
  return std::pow(weighted_sum(w, outer), 1.0 / exponent);
}

double log_c(double t) {
  const double tc = conjugate(t);
  return std::log(t) / (2.0 * t) - std::log(tc) / (2.0 * tc);
}

struct FrameCot {
  double cot2, cot3, sin2, sin3;
};

FrameCot young_cot(double p, double q, double r) {
  const Frame2 f = young_frame(p, q, r);
  const double t2 = f.direction(1).theta(), t3 = f.direction(2).theta();
  return {std::cos(t2) / std::sin(t2), std::cos(t3) / std::sin(t3), std::sin(t2), std::sin(t3)};
}

}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs, double constant,
                             double tolerance, std::string digest, bool applies) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant = constant;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.inputs_digest = std::move(digest);
  r.contract_applies = applies;
  return r;
}

// --- subadditivity ------------------------------------------------------------

InequalityReport check_subadditivity(const Frame2& frame, const GridDensity2D& f) {
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += frame.weight(i) * entropy(marginal(f, frame.direction(i))).value;
  return make_report("subadditivity", lhs, entropy(f).value, 0.0, tolerance::kEntropy,
                     fmt::format("{}; {} {}", frame_digest(frame), to_string(f.reference()),
                                 grid_digest(f.grid())));
}

InequalityReport check_subadditivity(const Frame2& frame, const GaussianDensity& f) {
  require_dimension(f, 2);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += frame.weight(i) * entropy(f.marginal(frame.direction(i))).value;
  return make_report("subadditivity", lhs, entropy(f).value, 0.0, tolerance::kEntropy,
                     fmt::format("{}; {}", frame_digest(frame), gaussian_digest(f)));
}

InequalityReport check_fisher_subadditivity(const Frame2& frame, const GridDensity2D& f) {
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += frame.weight(i) * fisher(marginal(f, frame.direction(i))).value;
  return make_report("fisher", lhs, fisher(f).value, 0.0, tolerance::kFisher,
                     fmt::format("{}; {} {}", frame_digest(frame), to_string(f.reference()),
                                 grid_digest(f.grid())));
}

InequalityReport check_fisher_subadditivity(const Frame2& frame, const GaussianDensity& f) {
  require_dimension(f, 2);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += frame.weight(i) * fisher(f.marginal(frame.direction(i))).value;
  return make_report("fisher", lhs, fisher(f).value, 0.0, tolerance::kFisher,
                     fmt::format("{}; {}", frame_digest(frame), gaussian_digest(f)));
}

InequalityReport check_main_entropy(const ExponentTriple& t, const GridDensity2D& f) {
  InequalityReport r = check_subadditivity(angles_from_exponents(t), f);
  r.name = "main-entropy";
  r.inputs_digest = fmt::format("p=({:.6g},{:.6g},{:.6g}); {}", t.p(0), t.p(1), t.p(2), r.inputs_digest);
  return r;
}

InequalityReport check_main_entropy(const ExponentTriple& t, const GaussianDensity& f) {
  InequalityReport r = check_subadditivity(angles_from_exponents(t), f);
  r.name = "main-entropy";
  r.inputs_digest = fmt::format("p=({:.6g},{:.6g},{:.6g}); {}", t.p(0), t.p(1), t.p(2), r.inputs_digest);
  return r;
}

InequalityReport check_main_integral(const ExponentTriple& t, const GridFunction1D& g,
                                     const GridFunction1D& h, ReferenceMeasure r) {
  const Frame2 frame = angles_from_exponents(t);
  const Vec2 u2 = frame.direction(1).unit_vector();
  const Vec2 u3 = frame.direction(2).unit_vector();
  const double lhs = nested_norm(g, u2.x, u2.y, h, u3.x, u3.y, r, g.grid(), t.conjugate_of(0));
  const double rhs = lp_norm(g, t.p(1), r) * lp_norm(h, t.p(2), r);
  return make_report("main-integral", lhs, rhs, 1.0, tolerance::kEntropy,
                     fmt::format("p=({:.6g},{:.6g},{:.6g}); {} {}", t.p(0), t.p(1), t.p(2), to_string(r),
                                 grid_digest(g.grid())));
}

GridFunction1D extremizer_function(double a, double lambda, double k, double p, ReferenceMeasure r,
                                   const UniformGrid& grid) {
  if (!(lambda > 0.0) || !(k > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "extremizer needs lambda > 0 and K > 0");
  }
  require_exponent(p, "p");
  return GridFunction1D::sample(
      grid,
      [=](double t) {
        const double log_mass = std::log(k) - lambda * (t - a) * (t - a) - log_reference_weight(r, t);
        return std::exp(log_mass / p);
      },
      natural_extension(r));
}

std::pair<GridFunction1D, GridFunction1D> extremizer_pair(const GaussianExtremizer& e, double p2,
                                                          double p3, ReferenceMeasure r,
                                                          const UniformGrid& grid) {
  return {extremizer_function(e.a2, e.lambda, e.k2, p2, r, grid),
          extremizer_function(e.a3, e.lambda, e.k3, p3, r, grid)};
}

// --- Young --------------------------------------------------------------------

double young_constant(double p, double q, double r) {
  young_triple(p, q, r);
  return std::exp(log_c(p) + log_c(q) - log_c(r));
}

double young_log_constant(double p, double q, double r) {
  young_triple(p, q, r);
  const double pc = conjugate(p), qc = conjugate(q), rc = conjugate(r);
  auto term = [](double t) { return std::log(std::sqrt(t)) / t; };
  return -term(r) + term(rc) + term(p) - term(pc) + term(q) - term(qc);
}

double young_log_constant_geometric(double p, double q, double r) {
  const FrameCot c = young_cot(p, q, r);
  const double rc = conjugate(r);
  return (1.0 - 1.0 / rc) * std::log(std::abs(c.cot3 - c.cot2)) + std::log(c.sin2) / p +
         std::log(c.sin3) / q;
}

InequalityReport check_young_convolution(const GridFunction1D& f, const GridFunction1D& g, double p,
                                         double q, double r) {
  const double c = young_constant(p, q, r);
  const GridFunction1D fg = convolve(f, g);
  const double lhs = lp_norm(fg, r, ReferenceMeasure::Lebesgue);
  const double rhs = c * lp_norm(f, p, ReferenceMeasure::Lebesgue) * lp_norm(g, q, ReferenceMeasure::Lebesgue);
  return make_report("young-conv", lhs, rhs, c, tolerance::kEntropy,
                     fmt::format("p={:.6g} q={:.6g} r={:.6g}; {}", p, q, r, grid_digest(f.grid())));
}

InequalityReport check_young_convolution(const GridDensity1D& f, const GridDensity1D& g, double p,
                                         double q, double r) {
  require(f.reference(), ReferenceMeasure::Lebesgue, "Young's convolution inequality");
  require(g.reference(), ReferenceMeasure::Lebesgue, "Young's convolution inequality");
  return check_young_convolution(f.function(), g.function(), p, q, r);
}

InequalityReport check_young_entropy(const GridDensity2D& f, double p, double q, double r) {
  require(f.reference(), ReferenceMeasure::Lebesgue, "the entropic Young inequality");
  const double d = young_log_constant(p, q, r);
  const double rc = conjugate(r);
  const double sx = entropy(marginal(f, Direction(0.0))).value;
  const double sy = entropy(marginal(f, Direction(kPi / 2.0))).value;
  // The 3pi/4 marginal is the law of (Y - X)/sqrt2; S(aZ) = S(Z) - log|a|.
  const double sd = entropy(marginal(f, Direction(3.0 * kPi / 4.0))).value - std::log(std::numbers::sqrt2);
  const double lhs = sx / rc + sd / p + sy / q;
  return make_report("young-entropy", lhs, entropy(f).value + d, d, tolerance::kEntropy,
                     fmt::format("p={:.6g} q={:.6g} r={:.6g}; {}", p, q, r, grid_digest(f.grid())));
}

InequalityReport check_young_entropy(const GaussianDensity& f, double p, double q, double r) {
  require_dimension(f, 2);
  require(f.reference(), ReferenceMeasure::Lebesgue, "the entropic Young inequality");
  const double d = young_log_constant(p, q, r);
  const double rc = conjugate(r);
  const Mat2 c = f.covariance();
  const Vec2 m = f.mean();
  auto s1 = [](double mean, double var) {
    return entropy(GaussianDensity::make1d(ReferenceMeasure::Lebesgue, mean, var)).value;
  };
  const double lhs = s1(m.x, c.a11) / rc + s1(m.x - m.y, c.a11 + c.a22 - c.a12 - c.a21) / p +
                     s1(m.y, c.a22) / q;
  return make_report("young-entropy", lhs, entropy(f).value + d, d, tolerance::kEntropy,
                     fmt::format("p={:.6g} q={:.6g} r={:.6g}; {}", p, q, r, gaussian_digest(f)));
}

Mat2 young_entropy_extremal_covariance(double p, double q, double r) {
  const FrameCot c = young_cot(p, q, r);
  // (X, Y) = A (W, Z) with the coordinates listed as (Y, X) to match the
  // order (1/r') S(X) + (1/p) S(X - Y) + (1/q) S(Y).
  const double diff = c.cot3 - c.cot2;
  return {diff * diff, c.cot3 * diff, c.cot3 * diff, c.cot3 * c.cot3 + 1.0};
}

// --- Shannon ------------------------------------------------------------------

InequalityReport check_shannon(const GridDensity1D& g, const GridDensity1D& h) {
  require(g.reference(), ReferenceMeasure::Lebesgue, "Shannon's inequality");
  require(h.reference(), ReferenceMeasure::Lebesgue, "Shannon's inequality");
  const GridDensity1D mid = scale1d(convolve(g, h), 1.0 / std::numbers::sqrt2);
  const double rhs = 0.5 * (entropy(g).value + entropy(h).value);
  return make_report("shannon", entropy(mid).value, rhs, 0.0, tolerance::kEntropy, grid_digest(g.grid()));
}

InequalityReport check_shannon(const GaussianDensity& g, const GaussianDensity& h) {
  require_dimension(g, 1);
  require_dimension(h, 1);
  require(g.reference(), ReferenceMeasure::Lebesgue, "Shannon's inequality");
  require(h.reference(), ReferenceMeasure::Lebesgue, "Shannon's inequality");
  const auto mid = GaussianDensity::make1d(ReferenceMeasure::Lebesgue,
                                           (g.mean1d() + h.mean1d()) / std::numbers::sqrt2,
                                           0.5 * (g.variance1d() + h.variance1d()));
  const double rhs = 0.5 * (entropy(g).value + entropy(h).value);
  return make_report("shannon", entropy(mid).value, rhs, 0.0, tolerance::kEntropy,
                     fmt::format("{}; {}", gaussian_digest(g), gaussian_digest(h)));
}

std::pair<InequalityReport, InequalityReport> check_blachmann_stam(const GridDensity1D& g,
                                                                   const GridDensity1D& h) {
  require(g.reference(), ReferenceMeasure::Lebesgue, "the Blachmann-Stam inequality");
  require(h.reference(), ReferenceMeasure::Lebesgue, "the Blachmann-Stam inequality");
  const GridDensity1D sum = convolve(g, h);
  const double ig = fisher(g).value, ih = fisher(h).value;
  const std::string digest = grid_digest(g.grid());
  return {make_report("blachmann-stam", fisher(scale1d(sum, 1.0 / std::numbers::sqrt2)).value,
                      0.5 * (ig + ih), 0.0, tolerance::kFisher, digest),
          make_report("blachmann-stam-harmonic", fisher(sum).value, ig * ih / (ig + ih), 0.0,
                      tolerance::kFisher, digest)};
}

std::pair<InequalityReport, InequalityReport> check_blachmann_stam(const GaussianDensity& g,
                                                                   const GaussianDensity& h) {
  require_dimension(g, 1);
  require_dimension(h, 1);
  require(g.reference(), ReferenceMeasure::Lebesgue, "the Blachmann-Stam inequality");
  require(h.reference(), ReferenceMeasure::Lebesgue, "the Blachmann-Stam inequality");
  const double v = g.variance1d() + h.variance1d();
  const double ig = 1.0 / g.variance1d(), ih = 1.0 / h.variance1d();
  const std::string digest = fmt::format("{}; {}", gaussian_digest(g), gaussian_digest(h));
  return {make_report("blachmann-stam", 2.0 / v, 0.5 * (ig + ih), 0.0, tolerance::kFisher, digest),
          make_report("blachmann-stam-harmonic", 1.0 / v, ig * ih / (ig + ih), 0.0, tolerance::kFisher,
                      digest)};
}

namespace {

template <class Entropy>
std::vector<ShannonTaylorPoint> taylor_series(const std::vector<double>& s_values, double sg, double sh,
                                              Entropy&& combination) {
  const double half = 1.0 / std::numbers::sqrt2;
  const double smid = combination(half, half);
  const double first_order = 4.0 * smid - 2.0 * sg - 2.0 * sh;
  std::vector<ShannonTaylorPoint> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    const Frame2 frame = shannon_limit_frame(s);
    ShannonTaylorPoint pt;
    pt.s = s;
    pt.lhs = frame.weight(0) * combination(std::cos(s), std::sin(s)) + frame.weight(1) * smid +
             frame.weight(2) * combination(std::sin(s), std::cos(s));
    pt.rhs = sg + sh;
    pt.residual = (pt.rhs - pt.lhs) / s - first_order;
    out.push_back(pt);
  }
  return out;
}

}  // namespace

std::vector<ShannonTaylorPoint> shannon_taylor_check(const GridDensity1D& g, const GridDensity1D& h,
                                                     const std::vector<double>& s_values) {
  require(g.reference(), ReferenceMeasure::Lebesgue, "the Shannon limit");
  require(h.reference(), ReferenceMeasure::Lebesgue, "the Shannon limit");
  return taylor_series(s_values, entropy(g).value, entropy(h).value, [&](double a, double b) {
    return entropy(linear_combination_density(g, h, a, b)).value;
  });
}

std::vector<ShannonTaylorPoint> shannon_taylor_check(const GaussianDensity& g,
                                                     const GaussianDensity& h,
                                                     const std::vector<double>& s_values) {
  require_dimension(g, 1);
  require_dimension(h, 1);
  require(g.reference(), ReferenceMeasure::Lebesgue, "the Shannon limit");
  require(h.reference(), ReferenceMeasure::Lebesgue, "the Shannon limit");
  return taylor_series(s_values, entropy(g).value, entropy(h).value, [&](double a, double b) {
    return entropy(GaussianDensity::make1d(ReferenceMeasure::Lebesgue, a * g.mean1d() + b * h.mean1d(),
                                           a * a * g.variance1d() + b * b * h.variance1d()))
        .value;
  });
}

// --- Gaussian measure ---------------------------------------------------------

HyperAngles hyper_angles(double p, double r) {
  require_exponent(p, "p");
  require_exponent(r, "r");
  const double inv_q = 1.0 / p + 1.0 / r - 1.0;
  if (!(inv_q > 0.0)) {
    throw Error(ErrorKind::InvalidExponents,
                fmt::format("1/p + 1/r - 1 = {:.6g} leaves no admissible q", inv_q));
  }
  const double q = 1.0 / inv_q;
  return {q, std::acos(std::sqrt((p - 1.0) / (q - 1.0))), std::acos(-std::sqrt((r - 1.0) / (q - 1.0)))};
}

InequalityReport check_hyper_two_function(const GridFunction1D& f, const GridFunction1D& g, double p,
                                          double r) {
  const HyperAngles a = hyper_angles(p, r);
  const ReferenceMeasure gamma = ReferenceMeasure::StandardGaussian;
  const double lhs = nested_norm(f, std::cos(a.theta), std::sin(a.theta), g, std::cos(a.xi),
                                 std::sin(a.xi), gamma, f.grid(), a.q);
  const double rhs = lp_norm(f, p, gamma) * lp_norm(g, r, gamma);
  return make_report("hyper2", lhs, rhs, 1.0, tolerance::kEntropy,
                     fmt::format("p={:.6g} r={:.6g} q={:.6g}; {}", p, r, a.q, grid_digest(f.grid())));
}

InequalityReport hyper_two_function_exponential(double alpha, double beta, double p, double r) {
  const HyperAngles a = hyper_angles(p, r);
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cx = std::cos(a.xi), sx = std::sin(a.xi);
  const double inner = alpha * st + beta * sx;
  const double outer = alpha * ct + beta * cx;
  const double lhs = std::exp(0.5 * inner * inner + 0.5 * a.q * outer * outer);
  const double rhs = std::exp(0.5 * p * alpha * alpha + 0.5 * r * beta * beta);
  return make_report("hyper2", lhs, rhs, 1.0, tolerance::kEntropy,
                     fmt::format("f=exp({:.6g}x) g=exp({:.6g}x) p={:.6g} r={:.6g} q={:.6g}; closed form",
                                 alpha, beta, p, r, a.q));
}

namespace {

void check_hyper_inputs(double p, double q, double theta) {
  if (!(p > 1.0 && q > p) || !std::isfinite(q)) {
    throw Error(ErrorKind::InvalidExponents,
                fmt::format("hypercontractivity needs 1 < p < q, got p={} q={}", p, q));
  }
  if (!(theta >= 0.0 && theta <= kPi / 2.0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("theta {} is outside [0, pi/2]", theta));
  }
}

bool hyper_applies(double p, double q, double theta) {
  return std::cos(theta) <= std::sqrt((p - 1.0) / (q - 1.0)) + 1e-12;
}

}  // namespace

double hypercontractivity_threshold(double p, double q) {
  check_hyper_inputs(p, q, 0.0);
  return std::acos(std::sqrt((p - 1.0) / (q - 1.0)));
}

InequalityReport check_hypercontractivity(const GridFunction1D& f, double p, double q, double theta) {
  check_hyper_inputs(p, q, theta);
  const ReferenceMeasure gamma = ReferenceMeasure::StandardGaussian;
  const double lhs = lp_norm(hermite_p_theta(f, theta), q, gamma);
  const double rhs = lp_norm(f, p, gamma);
  return make_report("hyper", lhs, rhs, 1.0, tolerance::kHyper,
                     fmt::format("p={:.6g} q={:.6g} theta={:.6f}; {}", p, q, theta, grid_digest(f.grid())),
                     hyper_applies(p, q, theta));
}

InequalityReport hypercontractivity_exponential(double a, double p, double q, double theta) {
  check_hyper_inputs(p, q, theta);
  const double c = std::cos(theta), s = std::sin(theta);
  const double lhs = std::exp(0.5 * a * a * s * s + 0.5 * q * a * a * c * c);
  const double rhs = std::exp(0.5 * p * a * a);
  return make_report("hyper", lhs, rhs, 1.0, tolerance::kHyper,
                     fmt::format("f=exp({:.6g}x) p={:.6g} q={:.6g} theta={:.6f}; closed form", a, p, q, theta),
                     hyper_applies(p, q, theta));
}

InequalityReport check_log_sobolev(const GridDensity1D& f) {
  require(f.reference(), ReferenceMeasure::StandardGaussian, "the log-Sobolev inequality");
  return make_report("lsi", entropy(f).value, 0.5 * fisher(f).value, 0.5, tolerance::kHyper,
                     grid_digest(f.grid()));
}

InequalityReport check_log_sobolev(const GaussianDensity& f) {
  require(f.reference(), ReferenceMeasure::StandardGaussian, "the log-Sobolev inequality");
  return make_report("lsi", entropy(f).value, 0.5 * fisher(f).value, 0.5, tolerance::kHyper,
                     gaussian_digest(f));
}

InequalityReport check_integrated_lsi(const GridDensity1D& f, double theta) {
  require(f.reference(), ReferenceMeasure::StandardGaussian, "the integrated log-Sobolev inequality");
  const FlowTime t = FlowTime::from_theta(theta);
  const double c = std::cos(theta);
  return make_report("lsi-integrated", entropy(ou_flow(f, t)).value, c * c * entropy(f).value, c * c,
                     tolerance::kHyper, fmt::format("theta={:.6f}; {}", theta, grid_digest(f.grid())));
}

InequalityReport check_integrated_lsi(const GaussianDensity& f, double theta) {
  require(f.reference(), ReferenceMeasure::StandardGaussian, "the integrated log-Sobolev inequality");
  const FlowTime t = FlowTime::from_theta(theta);
  const double c = std::cos(theta);
  return make_report("lsi-integrated", entropy(ou_flow(f, t)).value, c * c * entropy(f).value, c * c,
                     tolerance::kHyper, fmt::format("theta={:.6f}; {}", theta, gaussian_digest(f)));
}

// --- Brascamp-Lieb -------------------------------------------------------------

InequalityReport check_brascamp_lieb(const Frame2& frame, const GridFunction1D& f1,
                                     const GridFunction1D& f2, const GridFunction1D& f3,
                                     ReferenceMeasure r) {
  const std::array<const GridFunction1D*, 3> fs{&f1, &f2, &f3};
  const UniformGrid& g = f1.grid();
  const auto w = quadrature_weights(r, g);
  std::array<Vec2, 3> u;
  for (int i = 0; i < 3; ++i) u[static_cast<std::size_t>(i)] = frame.direction(i).unit_vector();

  std::vector<double> row(g.n);
  double lhs = 0.0;
  for (std::size_t iy = 0; iy < g.n; ++iy) {
    const double y = g.at(iy);
    for (std::size_t ix = 0; ix < g.n; ++ix) {
      const double x = g.at(ix);
      double prod = 1.0;
      for (std::size_t k = 0; k < 3 && prod > 0.0; ++k) {
        const double v = std::max(0.0, fs[k]->cubic(x * u[k].x + y * u[k].y));
        prod *= std::pow(v, frame.weight(static_cast<int>(k)));
      }
      row[ix] = prod;
    }
    lhs += w[iy] * weighted_sum(w, row);
  }

  double rhs = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double mass = weighted_sum(quadrature_weights(r, fs[k]->grid()), fs[k]->values());
    rhs *= std::pow(mass, frame.weight(static_cast<int>(k)));
  }
  return make_report("brascamp-lieb", lhs, rhs, 1.0, tolerance::kEntropy,
                     fmt::format("{}; {} {}", frame_digest(frame), to_string(r), grid_digest(g)));
}

}  // namespace entroframe
