#include "entroframe/frame2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "entroframe/error.hpp"

namespace entroframe {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSectorTol = 1e-12;
constexpr double kDegenerateTol = 1e-12;
constexpr double kInputTol = 1e-9;
constexpr double kResidualTol = 1e-12;

bool in_open_unit(double c) { return c > 0.0 && c < 1.0; }

}  // namespace

Mat2 Mat2::inverse() const {
  const double d = det();
  if (std::abs(d) <= 1e-300) throw Error(ErrorKind::Singular, "matrix is singular");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

double Mat2::frobenius_distance(const Mat2& o) const {
  const double d11 = a11 - o.a11, d12 = a12 - o.a12, d21 = a21 - o.a21, d22 = a22 - o.a22;
  return std::sqrt(d11 * d11 + d12 * d12 + d21 * d21 + d22 * d22);
}

double canonical_angle(double theta) {
  double r = std::fmod(theta, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

Direction::Direction(double theta) : theta_(canonical_angle(theta)) {}

Vec2 Direction::unit_vector() const { return {std::cos(theta_), std::sin(theta_)}; }

double conjugate(double t) { return t / (t - 1.0); }

ExponentTriple ExponentTriple::make(double p1, double p2, double p3) {
  const std::array<double, 3> p{p1, p2, p3};
  for (double v : p) {
    if (!(v > 1.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidExponents, fmt::format("exponent {} is not > 1", v));
    }
  }
  const double sum = 1.0 / p1 + 1.0 / p2 + 1.0 / p3;
  if (std::abs(sum - 2.0) > kInputTol) {
    throw Error(ErrorKind::InvalidExponents,
                fmt::format("1/p1 + 1/p2 + 1/p3 = {:.12g}, expected 2", sum));
  }
  std::array<double, 3> q{};
  for (std::size_t i = 0; i < 3; ++i) {
    q[i] = p[i] * sum / 2.0;
    if (!(q[i] > 1.0)) throw Error(ErrorKind::InvalidExponents, "exponent collapses to 1");
  }
  return ExponentTriple(q);
}

Mat2 Frame2::assembled() const {
  Mat2 m{};
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 u = directions_[i].unit_vector();
    m.a11 += weights_[i] * u.x * u.x;
    m.a12 += weights_[i] * u.x * u.y;
    m.a21 += weights_[i] * u.y * u.x;
    m.a22 += weights_[i] * u.y * u.y;
  }
  return m;
}

double Frame2::residual() const { return assembled().frobenius_distance(Mat2::identity()); }

std::string Frame2::describe() const {
  return fmt::format("theta=({:.10f}, {:.10f}, {:.10f}) weights=({:.10f}, {:.10f}, {:.10f}) residual={:.3e}",
                     directions_[0].theta(), directions_[1].theta(), directions_[2].theta(),
                     weights_[0], weights_[1], weights_[2], residual());
}

Frame2 Frame2::checked(std::array<Direction, 3> d, std::array<double, 3> c) {
  for (double w : c) {
    if (!in_open_unit(w)) {
      throw Error(ErrorKind::WeightOutOfRange, fmt::format("weight {:.6g} outside (0, 1)", w));
    }
  }
  Frame2 f(d, c);
  const double res = f.residual();
  if (!(res <= kResidualTol)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("decomposition residual {:.3e} exceeds {:.0e}", res, kResidualTol));
  }
  return f;
}

std::array<double, 3> sector_widths(Direction d1, Direction d2, Direction d3) {
  std::array<double, 3> a{d1.theta(), d2.theta(), d3.theta()};
  std::sort(a.begin(), a.end());
  return {a[1] - a[0], a[2] - a[1], kPi - a[2] + a[0]};
}

Frame2 weights_from_directions(Direction d1, Direction d2, Direction d3) {
  const auto sectors = sector_widths(d1, d2, d3);
  for (std::size_t k = 0; k < 3; ++k) {
    if (sectors[k] <= kDegenerateTol) {
      throw Error(ErrorKind::DegenerateDirections, "two directions coincide modulo pi");
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    if (kPi / 2.0 - sectors[k] <= kSectorTol) {
      throw Error(ErrorKind::SectorViolation,
                  fmt::format("sector violation: sector {} measures {:.4f} ≥ π/2", k + 1,
                              sectors[k]));
    }
  }
  const std::array<double, 3> t{d1.theta(), d2.theta(), d3.theta()};
  std::array<double, 3> c{};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    const std::size_t k = (i + 2) % 3;
    c[i] = std::cos(t[j] - t[k]) / (std::sin(t[j] - t[i]) * std::sin(t[k] - t[i]));
  }
  return Frame2::checked({d1, d2, d3}, c);
}

Frame2 directions_from_weights(double c1, double c2, double c3) {
  for (double c : {c1, c2, c3}) {
    if (!in_open_unit(c)) {
      throw Error(ErrorKind::WeightOutOfRange, fmt::format("weight {:.6g} outside (0, 1)", c));
    }
  }
  const double sum = c1 + c2 + c3;
  if (std::abs(sum - 2.0) > kInputTol) {
    throw Error(ErrorKind::CompatibilityViolation,
                fmt::format("weights sum to {:.12g}, expected 2", sum));
  }
  c1 *= 2.0 / sum;
  c2 *= 2.0 / sum;
  c3 *= 2.0 / sum;
  for (double c : {c1, c2, c3}) {
    if (!in_open_unit(c)) {
      throw Error(ErrorKind::WeightOutOfRange, fmt::format("weight {:.6g} outside (0, 1)", c));
    }
  }
  const double u2x = std::sqrt((1.0 - c1) * (1.0 - c2) / (c1 * c2));
  const double u2y = std::sqrt((1.0 - c3) / (c1 * c2));
  const double u3x = -std::sqrt((1.0 - c1) * (1.0 - c3) / (c1 * c3));
  const double u3y = std::sqrt((1.0 - c2) / (c1 * c3));
  return Frame2::checked(
      {Direction(0.0), Direction(std::atan2(u2y, u2x)), Direction(std::atan2(u3y, u3x))},
      {c1, c2, c3});
}

Frame2 angles_from_exponents(const ExponentTriple& t) {
  const double p1 = t.p(0), p2 = t.p(1), p3 = t.p(2);
  const double cos2 = std::sqrt((p1 - 1.0) * (p2 - 1.0));
  const double sin2 = std::sqrt(p1 * p2 * (p3 - 1.0) / p3);
  const double cos3 = -std::sqrt((p1 - 1.0) * (p3 - 1.0));
  const double sin3 = std::sqrt(p1 * p3 * (p2 - 1.0) / p2);
  return Frame2::checked(
      {Direction(0.0), Direction(std::atan2(sin2, cos2)), Direction(std::atan2(sin3, cos3))},
      {1.0 / p1, 1.0 / p2, 1.0 / p3});
}

ExponentTriple young_triple(double p, double q, double r) {
  for (double v : {p, q, r}) {
    if (!(v > 1.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvalidExponents, fmt::format("Young exponent {} is not > 1", v));
    }
  }
  const double mismatch = 1.0 / p + 1.0 / q - 1.0 - 1.0 / r;
  if (std::abs(mismatch) > kInputTol) {
    throw Error(ErrorKind::InvalidExponents,
                fmt::format("1/p + 1/q - 1 - 1/r = {:.3e}, expected 0", mismatch));
  }
  return ExponentTriple::make(conjugate(r), p, q);
}

Frame2 young_frame(double p, double q, double r) {
  return angles_from_exponents(young_triple(p, q, r));
}

Frame2 shannon_limit_frame(double s) {
  if (!(s > -kPi / 2.0 && s < 0.0)) {
    throw Error(ErrorKind::SectorViolation, fmt::format("s = {} outside (-pi/2, 0)", s));
  }
  const Direction d1(s), d2(kPi / 4.0), d3(kPi / 2.0 - s);
  const auto sectors = sector_widths(d1, d2, d3);
  for (std::size_t k = 0; k < 3; ++k) {
    if (kPi / 2.0 - sectors[k] <= kSectorTol || sectors[k] <= kDegenerateTol) {
      throw Error(ErrorKind::SectorViolation,
                  fmt::format("sector violation: sector {} measures {:.4f} at s = {}", k + 1,
                              sectors[k], s));
    }
  }
  // General weight formula for (s, pi/4, pi/2 - s); c1 = c3 by the symmetry
  // about pi/4.
  const double c1 =
      std::cos(kPi / 4.0 - s) / (std::sin(kPi / 4.0 - s) * std::sin(kPi / 2.0 - 2.0 * s));
  const double c2 =
      std::cos(kPi / 2.0 - 2.0 * s) / (std::sin(kPi / 4.0 - s) * std::sin(s - kPi / 4.0));
  const double c3 =
      std::cos(s - kPi / 4.0) / (std::sin(2.0 * s - kPi / 2.0) * std::sin(s - kPi / 4.0));
  return Frame2::checked({d1, d2, d3}, {c1, c2, c3});
}

Frame2 mercedes_frame() {
  return weights_from_directions(Direction(0.0), Direction(kPi / 3.0), Direction(2.0 * kPi / 3.0));
}

double direction_distance(Direction a, Direction b) {
  const double d = std::abs(a.theta() - b.theta());
  return std::min(d, kPi - d);
}

double frame_distance(const Frame2& a, const Frame2& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    m = std::max(m, direction_distance(a.direction(i), b.direction(i)));
    m = std::max(m, std::abs(a.weight(i) - b.weight(i)));
  }
  return m;
}

}  // namespace entroframe
