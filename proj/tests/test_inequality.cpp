#include <doctest.h>

#include <cmath>
#include <random>

#include "entroframe/density.hpp"
#include "entroframe/functional.hpp"
#include "entroframe/inequality.hpp"
#include "oracles.hpp"

using namespace entroframe;
using oracle::kPi;
namespace tol = entroframe::tolerance;

namespace {

const UniformGrid kGrid = UniformGrid::symmetric(10.0, 2049);
const UniformGrid kCoarse = UniformGrid::symmetric(10.0, 513);

GridDensity1D gauss(double m, double v, const UniformGrid& g = kGrid,
                    ReferenceMeasure r = ReferenceMeasure::Lebesgue) {
  return GaussianDensity::make1d(r, m, v).to_grid(g);
}

GaussianDensity closed(double m, double v, ReferenceMeasure r = ReferenceMeasure::Lebesgue) {
  return GaussianDensity::make1d(r, m, v);
}

GridDensity2D std2(const UniformGrid& g = kGrid) {
  return GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, Mat2::identity()).to_grid_2d(g);
}

GridDensity1D smoothed_uniform(double a, double b, const UniformGrid& g) {
  const double s = 0.05 * std::sqrt(2.0);
  return sample_density(ReferenceMeasure::Lebesgue, g, [=](double x) {
    return std::log(0.5 * (std::erf((x - a) / s) - std::erf((x - b) / s)) / (b - a));
  });
}

GridFunction1D exponential(double a, const UniformGrid& g = kGrid) {
  return GridFunction1D::sample(g, [a](double x) { return std::exp(a * x); }, Extension::Clamp);
}

const Frame2 kMercedes = mercedes_frame();

// Marginal variance of N(0, S) along theta.
double marginal_var(const Mat2& s, double theta) {
  const double c = std::cos(theta), n = std::sin(theta);
  return s.a11 * c * c + 2 * s.a12 * c * n + s.a22 * n * n;
}

}  // namespace

TEST_CASE("reports") {
  const auto r = make_report("x", 1.0, 0.5, 0.0, 0.1, "d");
  CHECK(r.slack == -0.5);
  CHECK(r.violated());
  const auto off = make_report("x", 1.0, 0.5, 0.0, 0.1, "d", false);
  CHECK_FALSE(off.violated());
}

TEST_CASE("entropy subadditivity") {
  const auto eq = check_subadditivity(kMercedes, std2());
  CHECK(std::abs(eq.slack) <= 1e-5);

  const auto u = smoothed_uniform(0, 1, kGrid);
  CHECK(check_subadditivity(kMercedes, independent_product(u, u)).slack > 0.0);

  const Mat2 s{4, 0, 0, 1};
  const auto aniso = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, s);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += kMercedes.weight(i) * oracle::gauss_entropy(marginal_var(s, kMercedes.direction(i).theta()));
  const double rhs = oracle::gauss_entropy_2d(s.det());
  const auto c = check_subadditivity(kMercedes, aniso);
  CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(c.slack > 1e-3);
  CHECK(std::abs(check_subadditivity(kMercedes, aniso.to_grid_2d(kGrid)).slack - c.slack) <= 1e-4);
}

TEST_CASE("Fisher subadditivity") {
  CHECK(std::abs(check_fisher_subadditivity(kMercedes, std2()).slack) <= 1e-4);

  const auto g = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1.5, 1.5}, {0.5, 0.5}}, ReferenceMeasure::Lebesgue, kGrid);
  const auto h = oracle::to_grid(oracle::Mixture{{0.3, 0.7}, {0, 1}, {2, 0.6}}, ReferenceMeasure::Lebesgue, kGrid);
  CHECK(check_fisher_subadditivity(kMercedes, independent_product(g, h)).slack >= -1e-4);

  const Mat2 s{2, 1, 1, 2};
  const auto corr = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, s);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) lhs += kMercedes.weight(i) / marginal_var(s, kMercedes.direction(i).theta());
  const auto c = check_fisher_subadditivity(kMercedes, corr);
  CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(4.0 / 3).epsilon(1e-12));
  CHECK(c.slack > 0.0);
  CHECK(std::abs(check_fisher_subadditivity(kMercedes, corr.to_grid_2d(kGrid)).slack - c.slack) <= 1e-3);
}

TEST_CASE("main entropy inequality") {
  const auto t = ExponentTriple::make(2, 4.0 / 3, 4.0 / 3);
  CHECK(std::abs(check_main_entropy(t, std2()).slack) <= 1e-5);
  const auto sym = ExponentTriple::make(1.5, 1.5, 1.5);
  const auto skew = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, {3, 1, 1, 1});
  CHECK(check_main_entropy(sym, skew).slack > 0.0);
  CHECK(std::abs(check_main_entropy(sym, skew.to_grid_2d(kGrid)).slack - check_main_entropy(sym, skew).slack) <= 1e-4);
  const auto g = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1.5, 1.5}, {0.5, 0.5}}, ReferenceMeasure::Lebesgue, kGrid);
  CHECK(check_main_entropy(t, independent_product(g, smoothed_uniform(-1, 1, kGrid))).slack > 0.0);
}

TEST_CASE("main integral inequality") {
  const auto t = ExponentTriple::make(2, 4.0 / 3, 4.0 / 3);
  const auto one = GridFunction1D::sample(kGrid, [](double) { return 1.0; }, Extension::Clamp);
  const auto r1 = check_main_integral(t, one, one, ReferenceMeasure::StandardGaussian);
  CHECK(r1.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r1.rhs == doctest::Approx(1.0).epsilon(1e-10));

  for (auto ref : {ReferenceMeasure::Lebesgue, ReferenceMeasure::StandardGaussian}) {
    for (const auto& triple : {t, ExponentTriple::make(1.5, 1.5, 1.5), ExponentTriple::make(1.8, 1.6, 1 / (2 - 1 / 1.8 - 1 / 1.6))}) {
      const GaussianExtremizer e{0.3, -0.5, 0.5, 1.0, 2.0};
      const auto [g, h] = extremizer_pair(e, triple.p(1), triple.p(2), ref, kGrid);
      const auto eq = check_main_integral(triple, g, h, ref);
      CHECK(std::abs(eq.slack) <= 1e-3);
      // Perturbing one width is strictly worse.
      for (double f : {0.9, 1.1}) {
        const auto gp = extremizer_function(e.a2, e.lambda * f, e.k2, triple.p(1), ref, kGrid);
        CHECK(check_main_integral(triple, gp, h, ref).slack > eq.slack);
      }
    }
  }
}

TEST_CASE("Young constants") {
  CHECK(young_constant(4.0 / 3, 4.0 / 3, 2) == doctest::Approx(std::pow(4.0 / 3, 0.75) * std::pow(4.0, -0.25)).epsilon(1e-12));
  CHECK(young_constant(4.0 / 3, 4.0 / 3, 2) == doctest::Approx(0.877383).epsilon(1e-6));
  // p -> 1 with q -> r.
  const double r = 3.0;
  double prev = 0.0;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double p = 1 + eps, q = 1 / (1 / r + 1 - 1 / p);
    prev = young_constant(p, q, r);
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-4));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  int tested = 0;
  while (tested < 20) {
    const double ip = u(rng), iq = u(rng), ir = ip + iq - 1;
    if (!(ir > 0.01 && ir < 0.99)) continue;
    const double p = 1 / ip, q = 1 / iq, rr = 1 / ir;
    CHECK(std::abs(young_log_constant(p, q, rr) - std::log(young_constant(p, q, rr))) <= 1e-12);
    CHECK(std::abs(young_log_constant_geometric(p, q, rr) - young_log_constant(p, q, rr)) <= 1e-12);
    CHECK(young_constant(p, q, rr) == doctest::Approx(young_constant(q, p, rr)).epsilon(1e-14));
    CHECK(young_constant(p, q, rr) <= 1.0 + 1e-15);
    ++tested;
  }
  CHECK_THROWS_KIND(young_constant(1.5, 3, 3), ErrorKind::InvalidExponents);
}

TEST_CASE("Young convolution inequality") {
  SUBCASE("Gaussian width scan reaches equality") {
    const auto f = gauss(0, 1);
    double best = INFINITY, best_sigma = 0.0;
    for (int k = 0; k <= 40; ++k) {
      const double sigma = 0.5 * std::pow(4.0, k / 40.0);
      const auto r = check_young_convolution(f, gauss(0, sigma * sigma), 4.0 / 3, 4.0 / 3, 2);
      CHECK(r.slack >= -r.tolerance);
      if (std::abs(r.slack) / r.rhs < best) {
        best = std::abs(r.slack) / r.rhs;
        best_sigma = sigma;
      }
    }
    CHECK(best <= 1e-3);
    CHECK(best_sigma == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("uniforms") {
    const auto u = smoothed_uniform(0, 1, kGrid);
    const auto r = check_young_convolution(u, u, 4.0 / 3, 4.0 / 3, 2);
    CHECK(r.slack > 0.0);
    // Triangle density: L2 norm sqrt(2/3); ||u||_{4/3} = 1.
    CHECK(r.lhs == doctest::Approx(std::sqrt(2.0 / 3)).epsilon(2e-2));
    CHECK(r.rhs == doctest::Approx(young_constant(4.0 / 3, 4.0 / 3, 2)).epsilon(2e-2));
  }
  SUBCASE("wide Gaussians") {
    const auto r = check_young_convolution(gauss(0, 1), gauss(0, 9), 4.0 / 3, 4.0 / 3, 2);
    CHECK(r.slack > 0.0);
  }
  SUBCASE("perturbed widths are strictly worse") {
    const auto f = gauss(0, 1);
    const double eq = check_young_convolution(f, gauss(0, 1), 4.0 / 3, 4.0 / 3, 2).slack;
    for (double s : {0.9, 1.1}) CHECK(check_young_convolution(f, gauss(0, s * s), 4.0 / 3, 4.0 / 3, 2).slack > eq);
  }
  SUBCASE("symmetry in (p, f) and (q, g)") {
    const auto f = gauss(0.5, 0.7), g = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1, 1}, {0.4, 0.4}}, ReferenceMeasure::Lebesgue, kGrid);
    const double p = 1.5, q = 1.2, r = 1 / (1 / p + 1 / q - 1);
    const auto fg = check_young_convolution(f, g, p, q, r);
    const auto gf = check_young_convolution(g, f, q, p, r);
    CHECK(fg.slack == doctest::Approx(gf.slack).epsilon(1e-8));
    CHECK(fg.slack > 0.0);
  }
}

TEST_CASE("entropic Young inequality") {
  const double p = 4.0 / 3, q = 4.0 / 3, r = 2;
  const Mat2 s = young_entropy_extremal_covariance(p, q, r);
  CHECK(s.a11 == doctest::Approx(2.0));
  CHECK(s.a12 == doctest::Approx(1.0));
  CHECK(s.a22 == doctest::Approx(1.5));
  const auto g = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, s);
  CHECK(std::abs(check_young_entropy(g, p, q, r).slack) <= 1e-12);
  CHECK(std::abs(check_young_entropy(g.to_grid_2d(kGrid), p, q, r).slack) <= 2e-4);
  // Any multiple of the extremal covariance.
  const Mat2 s3{3 * s.a11, 3 * s.a12, 3 * s.a21, 3 * s.a22};
  CHECK(std::abs(check_young_entropy(GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, s3), p, q, r).slack) <= 1e-12);
  // Other exponents: closed form check of the constant.
  for (auto [pp, qq] : {std::pair{1.5, 1.5}, std::pair{1.25, 1.8}}) {
    const double rr = 1 / (1 / pp + 1 / qq - 1);
    const auto ge = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, young_entropy_extremal_covariance(pp, qq, rr));
    CHECK(std::abs(check_young_entropy(ge, pp, qq, rr).slack) <= 1e-12);
  }

  const auto iid = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, Mat2::identity());
  const auto c = check_young_entropy(iid, p, q, r);
  // Closed form: S(X) = S(Y) = S(N(0,1)), S(X - Y) = S(N(0,2)).
  const double lhs = (1 - 1 / r) * oracle::gauss_entropy(1) + oracle::gauss_entropy(2) / p + oracle::gauss_entropy(1) / q;
  CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(oracle::gauss_entropy_2d(1) + std::log(young_constant(p, q, r))).epsilon(1e-12));
  CHECK(c.slack > 0.0);
  CHECK(std::abs(check_young_entropy(iid.to_grid_2d(kGrid), p, q, r).slack - c.slack) <= 1e-4);

  const auto u = smoothed_uniform(-0.5, 0.5, kGrid);
  CHECK(check_young_entropy(independent_product(u, u), p, q, r).slack > 0.0);
}

TEST_CASE("Shannon inequality") {
  CHECK(std::abs(check_shannon(gauss(0, 1), gauss(0, 1)).slack) <= 1e-5);
  const auto c = check_shannon(gauss(0, 1), gauss(0, 4));
  CHECK(std::abs(c.lhs - oracle::gauss_entropy(2.5)) <= 1e-5);
  CHECK(std::abs(c.rhs - oracle::gauss_entropy(2.0)) <= 1e-5);
  CHECK(std::abs(c.slack - 0.5 * std::log(1.25)) <= 1e-4);
  CHECK(check_shannon(closed(0, 1), closed(0, 4)).slack == doctest::Approx(0.5 * std::log(1.25)).epsilon(1e-12));
  const auto bimodal = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-2, 2}, {0.5, 0.5}}, ReferenceMeasure::Lebesgue, kGrid);
  CHECK(check_shannon(bimodal, bimodal).slack > 0.0);
}

TEST_CASE("Blachmann-Stam") {
  const auto [iid, iid_h] = check_blachmann_stam(gauss(0, 1), gauss(0, 1));
  CHECK(std::abs(iid.slack) <= 1e-4);
  CHECK(std::abs(iid_h.slack) <= 1e-4);
  const auto [a, ah] = check_blachmann_stam(gauss(0, 1), gauss(0, 4));
  CHECK(a.lhs == doctest::Approx(0.4).epsilon(1e-4));
  CHECK(a.rhs == doctest::Approx(5.0 / 8).epsilon(1e-4));
  CHECK(a.slack == doctest::Approx(9.0 / 40).epsilon(1e-5));
  // I(X + Y) = 1/5 = I(X) I(Y) / (I(X) + I(Y)): equality for Gaussians.
  CHECK(ah.lhs == doctest::Approx(0.2).epsilon(1e-4));
  CHECK(std::abs(ah.slack) <= 1e-4);
  const auto [cf, cfh] = check_blachmann_stam(closed(0, 1), closed(0, 4));
  CHECK(cf.slack == doctest::Approx(9.0 / 40).epsilon(1e-12));
  CHECK(std::abs(cfh.slack) <= 1e-15);
  const auto g = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1.5, 1.5}, {0.5, 0.5}}, ReferenceMeasure::Lebesgue, kGrid);
  const auto h = oracle::to_grid(oracle::Mixture{{0.3, 0.7}, {0, 1}, {2, 0.6}}, ReferenceMeasure::Lebesgue, kGrid);
  const auto [m, mh] = check_blachmann_stam(g, h);
  CHECK(m.slack >= -1e-3);
  CHECK(mh.slack >= -1e-3);
}

TEST_CASE("Shannon as a limit of the frame inequality") {
  const std::vector<double> ss{-1e-2, -3e-3, -1e-3};
  SUBCASE("iid Gaussians") {
    for (const auto& pt : shannon_taylor_check(gauss(0, 1), gauss(0, 1), ss)) {
      CHECK(std::abs(pt.rhs - pt.lhs) <= 1e-6);
      CHECK(std::abs(pt.residual) <= 1e-4);
    }
  }
  SUBCASE("distinct variances: residual is O(s)") {
    const auto pts = shannon_taylor_check(closed(0, 1), closed(0, 4), ss);
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(std::abs(pts[k].residual) < std::abs(pts[k - 1].residual));
    const double slope = std::log(std::abs(pts[0].residual / pts[2].residual)) / std::log(ss[0] / ss[2]);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
    const auto grid = shannon_taylor_check(gauss(0, 1), gauss(0, 4), ss);
    for (std::size_t k = 0; k < ss.size(); ++k) CHECK(std::abs(grid[k].lhs - pts[k].lhs) <= 1e-5);
  }
  SUBCASE("mixtures satisfy the frame inequality") {
    const auto g = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1.5, 1.5}, {0.5, 0.5}}, ReferenceMeasure::Lebesgue, kGrid);
    const auto h = gauss(0.3, 2.0);
    for (const auto& pt : shannon_taylor_check(g, h, {-1e-2})) CHECK(pt.lhs <= pt.rhs + 1e-4);
  }
}

TEST_CASE("two-function hypercontractivity") {
  const auto angles = hyper_angles(4.0 / 3, 4.0 / 3);
  CHECK(angles.q == doctest::Approx(2.0));
  CHECK(std::cos(angles.theta) == doctest::Approx(std::sqrt(1.0 / 3)));
  CHECK(std::cos(angles.xi) == doctest::Approx(-std::sqrt(1.0 / 3)));

  const auto one = GridFunction1D::sample(kGrid, [](double) { return 1.0; }, Extension::Clamp);
  const auto r1 = check_hyper_two_function(one, one, 1.5, 1.5);
  CHECK(r1.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r1.rhs == doctest::Approx(1.0).epsilon(1e-10));

  for (auto [a, b] : {std::pair{1.0, 0.0}, std::pair{0.5, -0.7}, std::pair{-0.3, 0.4}}) {
    const auto cf = hyper_two_function_exponential(a, b, 1.5, 1.25);
    CHECK(std::abs(cf.slack) <= 1e-12 * cf.rhs);
    // |f|^p dgamma is a Gaussian of the extremal width.
    const auto gr = check_hyper_two_function(exponential(a), exponential(b), 1.5, 1.25);
    CHECK(std::abs(gr.slack) <= 1e-3);
    CHECK(gr.lhs == doctest::Approx(cf.lhs).epsilon(1e-6));
  }
  const auto bump = GridFunction1D::sample(kGrid, [](double x) { return 1.0 + 0.5 * std::sin(x); }, Extension::Clamp);
  CHECK(check_hyper_two_function(bump, exponential(0.3), 1.5, 1.25).slack > 0.0);
}

TEST_CASE("hypercontractivity") {
  const double p = 2, q = 4, a = 1;
  const double th = hypercontractivity_threshold(p, q);
  CHECK(std::cos(th) * std::cos(th) == doctest::Approx(1.0 / 3));
  const auto at = hypercontractivity_exponential(a, p, q, th);
  CHECK(at.rhs == doctest::Approx(std::exp(p * a * a / 2)).epsilon(1e-12));
  CHECK(at.lhs == doctest::Approx(at.rhs).epsilon(1e-12));
  CHECK(std::abs(at.slack) <= 1e-12);
  const auto past = hypercontractivity_exponential(a, p, q, std::acos(std::sqrt((p - 1) / (q - 1)) + 0.05));
  CHECK(past.lhs > past.rhs);
  CHECK_FALSE(past.contract_applies);
  CHECK_FALSE(past.violated());

  const auto one = GridFunction1D::sample(kGrid, [](double) { return 1.0; }, Extension::Clamp);
  for (double t : {0.0, 0.5, 1.2}) {
    const auto r = check_hypercontractivity(one, p, q, t);
    CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Quadrature agrees with the closed form.
  for (double t : {0.6, th, 1.2}) {
    const auto grid = check_hypercontractivity(exponential(a), p, q, t);
    const auto cf = hypercontractivity_exponential(a, p, q, t);
    CHECK(grid.lhs == doctest::Approx(cf.lhs).epsilon(1e-6));
    CHECK(grid.rhs == doctest::Approx(cf.rhs).epsilon(1e-6));
  }
}

TEST_CASE("property: hypercontractivity is sharp") {
  for (auto [p, q] : {std::pair{2.0, 4.0}, std::pair{1.5, 3.0}}) {
    // Scan theta upwards; slack turns nonnegative at the critical angle.
    double crossing = NAN;
    double prev = hypercontractivity_exponential(1.0, p, q, 0.0).slack;
    for (double t = 1e-4; t <= kPi / 2; t += 1e-4) {
      const double s = hypercontractivity_exponential(1.0, p, q, t).slack;
      if (prev < 0 && s >= 0) {
        crossing = t;
        break;
      }
      prev = s;
    }
    CHECK(std::abs(crossing - std::acos(std::sqrt((p - 1) / (q - 1)))) <= 1e-3);
  }
}

TEST_CASE("log-Sobolev") {
  const auto ex = sample_density(ReferenceMeasure::StandardGaussian, kGrid, [](double x) { return -0.5 * (x - 1) * (x - 1) - 0.5 * std::log(2 * kPi); });
  const auto r = check_log_sobolev(ex);
  CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.rhs == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(std::abs(r.slack) <= 1e-5);
  const auto one = check_log_sobolev(gauss(0, 1, kGrid, ReferenceMeasure::StandardGaussian));
  CHECK(std::abs(one.lhs) <= 1e-12);
  CHECK(std::abs(one.rhs) <= 1e-12);
  const auto n2 = check_log_sobolev(gauss(0, 2, kGrid, ReferenceMeasure::StandardGaussian));
  CHECK(n2.lhs == doctest::Approx(0.153426).epsilon(1e-5));
  CHECK(n2.rhs == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(n2.slack == doctest::Approx(0.096574).epsilon(1e-4));
  CHECK(check_log_sobolev(closed(0, 2, ReferenceMeasure::StandardGaussian)).slack == doctest::Approx(0.25 - (1 - std::log(2.0)) / 2));
  CHECK_THROWS_KIND(check_log_sobolev(gauss(0, 1)), ErrorKind::ReferenceMismatch);
}

TEST_CASE("integrated log-Sobolev") {
  const auto mix = oracle::to_grid(oracle::Mixture{{0.5, 0.5}, {-1, 1}, {0.5, 0.8}}, ReferenceMeasure::StandardGaussian, kGrid);
  const auto z = check_integrated_lsi(mix, 0.0);
  CHECK(std::abs(z.slack) <= 1e-12);
  const auto h = check_integrated_lsi(mix, kPi / 2);
  CHECK(std::abs(h.lhs) <= 1e-10);
  CHECK(std::abs(h.rhs) <= 1e-12);
  for (double a : {0.5, 1.0}) {
    const auto ex = sample_density(ReferenceMeasure::StandardGaussian, kGrid, [a](double x) { return -0.5 * (x - a) * (x - a) - 0.5 * std::log(2 * kPi); });
    for (double t : {0.3, 0.9, 1.4}) {
      const auto r = check_integrated_lsi(ex, t);
      const double c = std::cos(t);
      CHECK(r.lhs == doctest::Approx(c * c * a * a / 2).epsilon(1e-6));
      CHECK(std::abs(r.slack) <= 1e-6);
      CHECK(std::abs(check_integrated_lsi(closed(a, 1, ReferenceMeasure::StandardGaussian), t).slack) <= 1e-14);
    }
  }
  CHECK(check_integrated_lsi(mix, 0.7).slack > 0.0);
}

TEST_CASE("Brascamp-Lieb") {
  const auto one = GridFunction1D::sample(kCoarse, [](double) { return 1.0; }, Extension::Clamp);
  const auto r1 = check_brascamp_lieb(kMercedes, one, one, one, ReferenceMeasure::StandardGaussian);
  CHECK(r1.lhs == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r1.rhs == doctest::Approx(1.0).epsilon(1e-8));

  // f_i dt = lambda_i e^{-alpha^2 t^2} dt with a common alpha.
  for (const Frame2& frame : {kMercedes, directions_from_weights(0.5, 0.75, 0.75)}) {
    std::array<GridFunction1D, 3> f{
        GridFunction1D::sample(kCoarse, [](double t) { return 2.0 * std::exp(-0.7 * t * t); }),
        GridFunction1D::sample(kCoarse, [](double t) { return 0.5 * std::exp(-0.7 * t * t); }),
        GridFunction1D::sample(kCoarse, [](double t) { return 1.0 * std::exp(-0.7 * t * t); })};
    const auto r = check_brascamp_lieb(frame, f[0], f[1], f[2], ReferenceMeasure::Lebesgue);
    CHECK(std::abs(r.slack) <= 1e-3 * r.rhs);
  }
  const auto m1 = GridFunction1D::sample(kCoarse, [](double t) { return oracle::normal_pdf(t, -1, 0.4) + oracle::normal_pdf(t, 1, 0.4); });
  const auto m2 = GridFunction1D::sample(kCoarse, [](double t) { return std::exp(-std::abs(t)); });
  const auto m3 = GridFunction1D::sample(kCoarse, [](double t) { return oracle::normal_pdf(t, 0.5, 2.0); });
  CHECK(check_brascamp_lieb(kMercedes, m1, m2, m3, ReferenceMeasure::Lebesgue).slack > 0.0);
}

TEST_CASE("property: entropy and Brascamp-Lieb forms are tight together") {
  // The Mercedes frame is the exponent triple (3/2, 3/2, 3/2).
  const auto t = ExponentTriple::make(1.5, 1.5, 1.5);
  const auto entropic = check_main_entropy(t, std2(kCoarse));
  const auto g = GridFunction1D::sample(kCoarse, [](double x) { return std::exp(-0.5 * x * x); });
  const auto bl = check_brascamp_lieb(kMercedes, g, g, g, ReferenceMeasure::Lebesgue);
  CHECK(std::abs(entropic.slack) <= entropic.tolerance);
  CHECK(std::abs(bl.slack) <= bl.tolerance * bl.rhs);
}

TEST_CASE("property: random mixtures never violate") {
  std::mt19937_64 rng(17);
  const auto triple = ExponentTriple::make(2, 4.0 / 3, 4.0 / 3);
  for (int k = 0; k < 50; ++k) {
    const auto a = oracle::random_mixture(rng), b = oracle::random_mixture(rng);
    const auto g = oracle::to_grid(a, ReferenceMeasure::Lebesgue, kGrid);
    const auto h = oracle::to_grid(b, ReferenceMeasure::Lebesgue, kGrid);
    const auto gg = oracle::to_grid(a, ReferenceMeasure::StandardGaussian, kGrid);
    const auto hg = oracle::to_grid(b, ReferenceMeasure::StandardGaussian, kGrid);
    std::vector<InequalityReport> reports{
        check_shannon(g, h),
        check_blachmann_stam(g, h).first,
        check_blachmann_stam(g, h).second,
        check_young_convolution(g, h, 4.0 / 3, 4.0 / 3, 2),
        check_young_convolution(g, h, 1.5, 1.2, 1 / (1 / 1.5 + 1 / 1.2 - 1)),
        check_main_integral(triple, g.function(), h.function(), ReferenceMeasure::Lebesgue),
        check_main_integral(triple, gg.function(), hg.function(), ReferenceMeasure::StandardGaussian),
        check_log_sobolev(gg),
        check_integrated_lsi(gg, 0.8),
        check_hypercontractivity(gg.function(), 2, 4, 1.0),
        check_hyper_two_function(gg.function(), hg.function(), 1.5, 1.25),
    };
    if (k % 5 == 0) {
      const auto gc = oracle::to_grid(a, ReferenceMeasure::Lebesgue, kCoarse);
      const auto hc = oracle::to_grid(b, ReferenceMeasure::Lebesgue, kCoarse);
      const auto f2 = independent_product(gc, hc);
      reports.push_back(check_subadditivity(kMercedes, f2));
      reports.push_back(check_fisher_subadditivity(kMercedes, f2));
      reports.push_back(check_main_entropy(triple, f2));
      reports.push_back(check_young_entropy(f2, 4.0 / 3, 4.0 / 3, 2));
      reports.push_back(check_brascamp_lieb(kMercedes, gc.function(), hc.function(), gc.function(), ReferenceMeasure::Lebesgue));
    }
    for (const auto& r : reports) {
      INFO(r.name, " slack ", r.slack, " tolerance ", r.tolerance, " ", r.inputs_digest);
      CHECK_FALSE(r.violated());
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_KIND(check_shannon(gauss(0, 1, kGrid, ReferenceMeasure::StandardGaussian), gauss(0, 1)), ErrorKind::ReferenceMismatch);
  CHECK_THROWS_KIND(check_young_convolution(gauss(0, 1), gauss(0, 1), 2, 2, 2), ErrorKind::InvalidExponents);
  CHECK_THROWS_KIND(hyper_angles(2, 2), ErrorKind::InvalidExponents);
  CHECK_THROWS_KIND(check_hypercontractivity(exponential(1), 4, 2, 0.5), ErrorKind::InvalidExponents);
}
