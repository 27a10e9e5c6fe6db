#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "entroframe/error.hpp"
#include "entroframe/simd/kernels.hpp"
#include "oracles.hpp"

using namespace entroframe::simd;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  const Kernels& k = kernels_for(Isa::Scalar);
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == 32.0);
  std::vector<double> out(2);
  const std::vector<double> x{1, 2, 3, 4};
  k.correlate(x.data(), a.data(), 3, out.data(), 2);
  CHECK(out[0] == 14.0);
  CHECK(out[1] == 20.0);
  const std::vector<double> f{1.0, 0.0, 2.0};
  CHECK(k.score_sum(a.data(), b.data(), f.data(), 3, 1e-300) == doctest::Approx(1 * 16 / 1.0 + 3 * 36 / 2.0));
  // Both interpolants reproduce bilinear functions exactly.
  std::vector<double> table(6 * 5);
  for (std::size_t iy = 0; iy < 5; ++iy)
    for (std::size_t ix = 0; ix < 6; ++ix) table[iy * 6 + ix] = 1.0 + 2.0 * ix - 0.5 * iy + 0.25 * ix * iy;
  const double w = 1.0;
  auto exact = [](double x, double y) { return 1.0 + 2.0 * x - 0.5 * y + 0.25 * x * y; };
  CHECK(k.bilinear_line(table.data(), 6, 5, 1.3, 2.7, 0, 0, &w, 1) == doctest::Approx(exact(1.3, 2.7)));
  CHECK(k.bicubic_line(table.data(), 6, 5, 1.3, 2.7, 0, 0, &w, 1) == doctest::Approx(exact(1.3, 2.7)));
}

TEST_CASE("bicubic line reproduces cubic polynomials") {
  const Kernels& k = kernels_for(Isa::Scalar);
  const std::size_t n = 9;
  auto poly = [](double x, double y) { return x * x * x - 2 * x * y * y + y * y * y + 0.5 * x * x * y; };
  std::vector<double> table(n * n);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) table[iy * n + ix] = poly(ix, iy);
  const double w = 1.0;
  for (double x : {0.2, 1.5, 3.7, 7.9})
    for (double y : {0.1, 2.5, 6.4, 8.0}) {
      CHECK(k.bicubic_line(table.data(), n, n, x, y, 0, 0, &w, 1) == doctest::Approx(poly(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("vector kernels agree with the scalar reference") {
  bool any = false;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) continue;
    any = true;
    INFO("isa ", std::string(to_string(isa)));
    const Kernels& s = kernels_for(Isa::Scalar);
    const Kernels& v = kernels_for(isa);
    std::mt19937_64 rng(7);
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 1000, 1001}) {
      const auto a = random_values(rng, n, -1.0, 1.0);
      const auto b = random_values(rng, n, -1.0, 1.0);
      CHECK(close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), static_cast<double>(n)));

      const auto w = random_values(rng, n, 0.0, 1.0);
      auto f = random_values(rng, n, -1e-3, 1.0);
      CHECK(close(s.score_sum(w.data(), a.data(), f.data(), n, 1e-6), v.score_sum(w.data(), a.data(), f.data(), n, 1e-6),
                  s.score_sum(w.data(), a.data(), f.data(), n, 1e-6)));

      for (std::size_t klen : {1, 2, 5, 9, 33}) {
        const auto x = random_values(rng, n + klen - 1, -1.0, 1.0);
        const auto kern = random_values(rng, klen, -1.0, 1.0);
        std::vector<double> o1(n), o2(n);
        s.correlate(x.data(), kern.data(), klen, o1.data(), n);
        v.correlate(x.data(), kern.data(), klen, o2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(close(o1[i], o2[i], static_cast<double>(klen)));
      }
    }

    const std::size_t nx = 37, ny = 41;
    const auto table = random_values(rng, nx * ny, 0.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 1.0), dir(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t count = 1 + static_cast<std::size_t>(trial % 23);
      const double dx = dir(rng) * 0.9, dy = dir(rng) * 0.9;
      // Keep every sample inside the table.
      const double x0 = 2 + pos(rng) * (nx - 5 - std::abs(dx) * count) + (dx < 0 ? std::abs(dx) * count : 0);
      const double y0 = 2 + pos(rng) * (ny - 5 - std::abs(dy) * count) + (dy < 0 ? std::abs(dy) * count : 0);
      const auto w = random_values(rng, count, 0.0, 1.0);
      const double b1 = s.bilinear_line(table.data(), nx, ny, x0, y0, dx, dy, w.data(), count);
      const double b2 = v.bilinear_line(table.data(), nx, ny, x0, y0, dx, dy, w.data(), count);
      CHECK(close(b1, b2, static_cast<double>(count)));
      const double c1 = s.bicubic_line(table.data(), nx, ny, x0, y0, dx, dy, w.data(), count);
      const double c2 = v.bicubic_line(table.data(), nx, ny, x0, y0, dx, dy, w.data(), count);
      CHECK(close(c1, c2, static_cast<double>(count)));
    }
    // Samples on the table edges stay in bounds.
    const std::vector<double> ones(8, 1.0);
    CHECK(close(s.bicubic_line(table.data(), nx, ny, 0, 0, (nx - 1) / 7.0, (ny - 1) / 7.0, ones.data(), 8),
                v.bicubic_line(table.data(), nx, ny, 0, 0, (nx - 1) / 7.0, (ny - 1) / 7.0, ones.data(), 8), 8));
  }
  if (!any) MESSAGE("no vector ISA on this CPU; skipped");
}

TEST_CASE("unavailable ISAs are rejected") {
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) CHECK_THROWS_KIND(kernels_for(isa), entroframe::ErrorKind::InvalidArgument);
  }
}

TEST_CASE("active ISA can be switched") {
  const Isa before = active_isa();
  set_active_isa(Isa::Scalar);
  CHECK(active_isa() == Isa::Scalar);
  CHECK(&kernels() == &kernels_for(Isa::Scalar));
  set_active_isa(before);
  CHECK(active_isa() == before);
}
