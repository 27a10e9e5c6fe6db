#include <doctest.h>

#include <cmath>
#include <random>

#include "entroframe/density.hpp"
#include "entroframe/functional.hpp"
#include "oracles.hpp"

using namespace entroframe;
using oracle::kPi;

namespace {

const UniformGrid kGrid = UniformGrid::symmetric(10.0, 2049);
const UniformGrid kCoarse = UniformGrid::symmetric(10.0, 513);

double sup_error(const GridDensity1D& f, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < f.grid().n; ++i) e = std::max(e, std::abs(f.values()[i] - exact(f.grid().at(i))));
  return e;
}

double sup_error_2d(const GridDensity2D& f, const std::function<double(double, double)>& exact) {
  double e = 0.0;
  const auto& g = f.grid();
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix) e = std::max(e, std::abs(f.at(ix, iy) - exact(g.at(ix), g.at(iy))));
  return e;
}

double gauss2(double x, double y, double s11, double s12, double s22) {
  const double det = s11 * s22 - s12 * s12;
  const double q = (s22 * x * x - 2 * s12 * x * y + s11 * y * y) / det;
  return std::exp(-0.5 * q) / (2 * kPi * std::sqrt(det));
}

// Simpson-by-Simpson integral of phi(x.u) f(x) dmu_2 on the grid of f.
double projected_moment(const GridDensity2D& f, Vec2 u, const std::function<double(double)>& phi) {
  const auto& g = f.grid();
  const auto w = quadrature_weights(f.reference(), g);
  double s = 0.0;
  for (std::size_t iy = 0; iy < g.n; ++iy)
    for (std::size_t ix = 0; ix < g.n; ++ix)
      s += w[ix] * w[iy] * f.at(ix, iy) * phi(g.at(ix) * u.x + g.at(iy) * u.y);
  return s;
}

double moment(const GridDensity1D& f, const std::function<double(double)>& phi) {
  const auto w = quadrature_weights(f.reference(), f.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < f.grid().n; ++i) s += w[i] * f.values()[i] * phi(f.grid().at(i));
  return s;
}

}  // namespace

TEST_CASE("Gaussian densities on grids") {
  const auto f = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0.0, 1.0).to_grid(kGrid);
  CHECK(std::abs(f.normalization().mass - 1.0) <= 1e-10);
  CHECK_FALSE(f.normalization().warned);
  CHECK(sup_error(f, [](double x) { return oracle::normal_pdf(x); }) <= 1e-12);

  const auto one = GaussianDensity::make1d(ReferenceMeasure::StandardGaussian, 0.0, 1.0).to_grid(kGrid);
  for (double v : one.values()) CHECK(std::abs(v - 1.0) <= 1e-12);

  const auto g = GaussianDensity::make1d(ReferenceMeasure::StandardGaussian, 0.5, 2.0);
  CHECK(g(0.7) == doctest::Approx(oracle::normal_pdf(0.7, 0.5, 2.0) / oracle::normal_pdf(0.7)));
  CHECK_THROWS_KIND(GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, {1, 2, 2, 1}), ErrorKind::NotSPD);
  CHECK_THROWS_KIND(GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 0), ErrorKind::NotSPD);
}

TEST_CASE("grid density validation and renormalization") {
  std::vector<double> v(kCoarse.n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = oracle::normal_pdf(kCoarse.at(i));
  auto scaled = v;
  for (double& x : scaled) x *= 1.005;
  const auto f = GridDensity1D::from_values(ReferenceMeasure::Lebesgue, kCoarse, scaled);
  CHECK(f.normalization().warned);
  CHECK(f.normalization().mass == doctest::Approx(1.005));
  CHECK(f.normalization().factor == doctest::Approx(1 / 1.005));
  CHECK(moment(f, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-14));

  for (double& x : scaled) x *= 1.05;
  CHECK_THROWS_KIND(GridDensity1D::from_values(ReferenceMeasure::Lebesgue, kCoarse, scaled), ErrorKind::Normalization);

  auto negative = v;
  negative[200] = -1e-3;
  CHECK_THROWS_KIND(GridDensity1D::from_values(ReferenceMeasure::Lebesgue, kCoarse, negative), ErrorKind::InvalidArgument);

  auto nan = v;
  nan[3] = NAN;
  CHECK_THROWS_AS(GridDensity1D::from_values(ReferenceMeasure::Lebesgue, kCoarse, nan), Error);

  CHECK_THROWS_KIND(GridDensity1D::from_values(ReferenceMeasure::Lebesgue, UniformGrid::symmetric(10, 512),
                                               std::vector<double>(512, 0.05)),
                    ErrorKind::InvalidGrid);
  CHECK_THROWS_KIND(GridDensity1D::from_values(ReferenceMeasure::Lebesgue, UniformGrid::symmetric(10, 63),
                                               std::vector<double>(63, 0.05)),
                    ErrorKind::InvalidGrid);
}

TEST_CASE("marginals") {
  SUBCASE("correlated Gaussian along theta = 0 is N(0, 2)") {
    const auto f = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, {2, 1, 1, 2}).to_grid_2d(kGrid);
    const auto m = marginal(f, Direction(0.0));
    CHECK(sup_error(m, [](double x) { return oracle::normal_pdf(x, 0, 2); }) <= 1e-8);
    const auto m2 = marginal(f, Direction(kPi / 3));
    // u^T S u = 2 + 2 cos sin
    const double var = 2.0 + 2 * std::cos(kPi / 3) * std::sin(kPi / 3);
    CHECK(sup_error(m2, [&](double x) { return oracle::normal_pdf(x, 0, var); }) <= 1e-6);
  }
  SUBCASE("standard Gaussian is rotation invariant") {
    const auto f = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, Mat2::identity()).to_grid_2d(kGrid);
    for (double t : {0.0, 0.3, kPi / 4, 1.2, 2.5}) {
      CHECK(sup_error(marginal(f, Direction(t)), [](double x) { return oracle::normal_pdf(x); }) <= 1e-6);
    }
  }
  SUBCASE("constant density under the Gaussian reference") {
    const auto f = GaussianDensity::make2d(ReferenceMeasure::StandardGaussian, {0, 0}, Mat2::identity()).to_grid_2d(kCoarse);
    for (double t : {0.0, 0.7, 2.0}) {
      CHECK(sup_error(marginal(f, Direction(t)), [](double) { return 1.0; }) <= 1e-8);
    }
  }
  SUBCASE("product along theta = 0 gives the first factor") {
    const oracle::Mixture a{{0.3, 0.7}, {-1, 1}, {0.5, 1}}, b{{1.0}, {0.5}, {2.0}};
    const auto g = oracle::to_grid(a, ReferenceMeasure::Lebesgue, kGrid);
    const auto h = oracle::to_grid(b, ReferenceMeasure::Lebesgue, kGrid);
    const auto m = marginal(independent_product(g, h), Direction(0.0));
    CHECK(sup_error(m, [&](double x) { return a.pdf(x); }) <= 1e-7);
  }
  SUBCASE("property: defining identity of the marginal") {
    const std::vector<std::function<double(double)>> phis{
        [](double) { return 1.0; }, [](double t) { return t; }, [](double t) { return t * t; },
        [](double t) { return std::sin(t); }};
    const auto leb = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0.3, -0.2}, {1.5, 0.4, 0.4, 0.8}).to_grid_2d(kCoarse);
    const auto gam = GaussianDensity::make2d(ReferenceMeasure::StandardGaussian, {0.5, 0.1}, {0.7, 0.2, 0.2, 1.3}).to_grid_2d(kCoarse);
    for (const auto* f : {&leb, &gam}) {
      for (double t : {0.0, 0.6, 2.2}) {
        const Direction d(t);
        const auto m = marginal(*f, d);
        for (const auto& phi : phis) {
          CHECK(std::abs(moment(m, phi) - projected_moment(*f, d.unit_vector(), phi)) <= 1e-5);
        }
      }
    }
  }
  SUBCASE("truncation is reported") {
    const auto wide = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, {1, 0, 0, 1});
    const auto f = wide.to_grid_2d(UniformGrid::symmetric(10, 129));
    CHECK_THROWS_KIND(marginal(f, Direction(0.0), UniformGrid::symmetric(1.0, 129)), ErrorKind::DomainTruncation);
  }
}

TEST_CASE("convolution") {
  const auto n01 = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1).to_grid(kGrid);
  SUBCASE("N(0,1) * N(0,1) = N(0,2)") {
    const auto c = convolve(n01, n01);
    CHECK(c.grid().lo == doctest::Approx(-20.0));
    CHECK(sup_error(c, [](double x) { return oracle::normal_pdf(x, 0, 2); }) <= 1e-6);
  }
  SUBCASE("narrow Gaussian acts as an identity") {
    const oracle::Mixture mix{{0.4, 0.6}, {-1, 1.5}, {0.6, 1.2}};
    const auto f = oracle::to_grid(mix, ReferenceMeasure::Lebesgue, kGrid);
    const auto delta = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1e-4).to_grid(kGrid);
    CHECK(sup_error(convolve(f, delta), [&](double x) { return mix.pdf(x); }) <= 1e-3);
  }
  SUBCASE("smoothed uniforms give a smoothed triangle") {
    // Each uniform[0,1] is smoothed by N(0, 0.05^2); the sum is the triangle on
    // [0, 2] smoothed by N(0, 2 * 0.05^2).
    const double s2 = 2 * 0.05 * 0.05;
    auto uniform = [](double x) {
      const double s = 0.05 * std::sqrt(2.0);
      return 0.5 * (std::erf(x / s) - std::erf((x - 1) / s));
    };
    const auto u = sample_density(ReferenceMeasure::Lebesgue, kGrid, [&](double x) { return std::log(uniform(x)); });
    const auto c = convolve(u, u);
    auto triangle = [](double t) { return t <= 0 || t >= 2 ? 0.0 : 1.0 - std::abs(t - 1.0); };
    for (double x : {0.0, 0.5, 1.0, 1.7, 2.2}) {
      const double exact =
          oracle::integrate([&](double t) { return triangle(t) * oracle::normal_pdf(x - t, 0, s2); }, 0.0, 2.0);
      CHECK(c(x) == doctest::Approx(exact).epsilon(1e-4));
    }
    CHECK(c(1.0) == doctest::Approx(1.0).epsilon(0.06));
  }
  SUBCASE("property: symmetric, and FFT agrees with direct") {
    const oracle::Mixture a{{0.5, 0.5}, {-2, 1}, {0.4, 1}}, b{{1.0}, {0.7}, {0.3}};
    const auto f = oracle::to_grid(a, ReferenceMeasure::Lebesgue, kGrid);
    const auto g = oracle::to_grid(b, ReferenceMeasure::Lebesgue, kGrid);
    const auto fg = convolve(f, g), gf = convolve(g, f), fft = convolve(f, g, ConvolutionMethod::Fft);
    double sym = 0.0, method = 0.0;
    for (std::size_t i = 0; i < fg.grid().n; ++i) {
      sym = std::max(sym, std::abs(fg.values()[i] - gf.values()[i]));
      method = std::max(method, std::abs(fg.values()[i] - fft.values()[i]));
    }
    CHECK(sym <= 1e-10);
    CHECK(method <= 1e-8);
  }
  SUBCASE("references and steps are checked") {
    const auto gam = GaussianDensity::make1d(ReferenceMeasure::StandardGaussian, 0, 1).to_grid(kGrid);
    CHECK_THROWS_KIND(convolve(n01, gam), ErrorKind::ReferenceMismatch);
    const auto coarse = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1).to_grid(kCoarse);
    CHECK_THROWS_KIND(convolve(n01, coarse), ErrorKind::InvalidGrid);
  }
}

TEST_CASE("affine pushforward") {
  const auto std2 = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0, 0}, Mat2::identity()).to_grid_2d(kCoarse);
  SUBCASE("identity") {
    const auto same = affine_pushforward(std2, Mat2::identity());
    CHECK(sup_error_2d(same, [&](double x, double y) { return std2(x, y); }) <= 1e-14);
  }
  SUBCASE("diag(2, 1) gives N(0, diag(4, 1))") {
    const auto f = affine_pushforward(std2, {2, 0, 0, 1});
    CHECK(sup_error_2d(f, [](double x, double y) { return gauss2(x, y, 4, 0, 1); }) <= 1e-6);
  }
  SUBCASE("entropy shift for the Young matrix") {
    // Frame of (4/3, 4/3, 2): cot t2 = 1/sqrt2, cot t3 = -1/sqrt2.
    const double c2 = 1 / std::sqrt(2.0), c3 = -1 / std::sqrt(2.0);
    const Mat2 a{c3, 1, c3 - c2, 0};
    const auto f = affine_pushforward(std2, a);
    CHECK(std::abs(entropy(f).value - entropy(std2).value + std::log(std::abs(a.det()))) <= 1e-4);
  }
  SUBCASE("property: composition") {
    const auto g = GaussianDensity::make2d(ReferenceMeasure::Lebesgue, {0.2, 0}, {0.8, 0.3, 0.3, 0.6}).to_grid_2d(kCoarse);
    const Mat2 a{1.2, 0.3, -0.2, 0.9}, b{0.8, -0.4, 0.1, 1.1};
    const auto ab = affine_pushforward(affine_pushforward(g, a), b);
    const auto direct = affine_pushforward(g, b * a);
    CHECK(sup_error_2d(ab, [&](double x, double y) { return direct(x, y); }) <= 1e-5 * 4);
  }
  SUBCASE("singular maps are rejected") {
    CHECK_THROWS_KIND(affine_pushforward(std2, {1, 2, 2, 4}), ErrorKind::Singular);
  }
}

TEST_CASE("scaling") {
  const auto n01 = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1).to_grid(kGrid);
  CHECK(sup_error(scale1d(n01, 1.0), [](double x) { return oracle::normal_pdf(x); }) <= 1e-14);
  CHECK(sup_error(scale1d(n01, std::sqrt(2.0)), [](double x) { return oracle::normal_pdf(x, 0, 2); }) <= 1e-7);
  const oracle::Mixture mix{{0.3, 0.7}, {-1.5, 0.8}, {0.3, 0.9}};
  const auto f = oracle::to_grid(mix, ReferenceMeasure::Lebesgue, kGrid);
  const auto r = scale1d(f, -1.0);
  CHECK(sup_error(r, [&](double x) { return mix.pdf(-x); }) <= 1e-12);
  CHECK(entropy(r).value == doctest::Approx(entropy(f).value).epsilon(1e-10));
  CHECK_THROWS_KIND(scale1d(f, 0.0), ErrorKind::ZeroScale);
}

TEST_CASE("independent products") {
  const auto n01 = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1).to_grid(kCoarse);
  const auto p = independent_product(n01, n01);
  CHECK(sup_error_2d(p, [](double x, double y) { return gauss2(x, y, 1, 0, 1); }) <= 1e-12);

  const auto one = GaussianDensity::make1d(ReferenceMeasure::StandardGaussian, 0, 1).to_grid(kCoarse);
  const auto p1 = independent_product(one, one);
  CHECK(sup_error_2d(p1, [](double, double) { return 1.0; }) <= 1e-12);

  const oracle::Mixture a{{0.3, 0.7}, {-1, 1}, {0.5, 1}}, b{{0.5, 0.5}, {-0.5, 2}, {1.5, 0.4}};
  const auto g = oracle::to_grid(a, ReferenceMeasure::Lebesgue, kGrid);
  const auto h = oracle::to_grid(b, ReferenceMeasure::Lebesgue, kGrid);
  CHECK(std::abs(entropy(independent_product(g, h)).value - entropy(g).value - entropy(h).value) <= 1e-6);
  CHECK_THROWS_KIND(independent_product(n01, one), ErrorKind::ReferenceMismatch);
}

TEST_CASE("linear combinations") {
  const auto g = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 1).to_grid(kGrid);
  const auto h = GaussianDensity::make1d(ReferenceMeasure::Lebesgue, 0, 4).to_grid(kGrid);
  for (auto [a, b] : {std::pair{0.6, 0.8}, std::pair{1.0, -0.01}, std::pair{0.999, 0.02}}) {
    const auto c = linear_combination_density(g, h, a, b);
    const double var = a * a + 4 * b * b;
    CHECK(sup_error(c, [&](double x) { return oracle::normal_pdf(x, 0, var); }) <= 1e-6);
  }
}
