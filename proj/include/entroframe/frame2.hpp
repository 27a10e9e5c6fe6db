#pragma once

// Decompositions of the identity of R^2 by three weighted directions:
//
//   c1 u1 u1^T + c2 u2 u2^T + c3 u3 u3^T = Id,   u_i = (cos t_i, sin t_i).
//
// Frames can be built from the directions (weights are then unique), from
// the weights (directions are unique up to an isometry; we return the
// representative with t1 = 0, t2 in (0, pi/2), t3 in (pi/2, pi)), from an
// exponent triple with 1/p1 + 1/p2 + 1/p3 = 2, or from Young exponents.

#include <array>
#include <string>

namespace entroframe {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const;
  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  double frobenius_distance(const Mat2& o) const;
};

/// A line through the origin; the angle is kept in [0, pi).
class Direction {
 public:
  explicit Direction(double theta = 0.0);

  double theta() const noexcept { return theta_; }
  Vec2 unit_vector() const;

 private:
  double theta_;
};

/// Reduces an angle modulo pi into [0, pi).
double canonical_angle(double theta);

/// Conjugate exponent t' = t / (t - 1).
double conjugate(double t);

/// (p1, p2, p3) with every p_i > 1 and 1/p1 + 1/p2 + 1/p3 = 2.
class ExponentTriple {
 public:
  /// Accepts reciprocal sums within 1e-9 of 2 and rescales the reciprocals so
  /// that the stored triple satisfies the constraint to round-off.
  static ExponentTriple make(double p1, double p2, double p3);

  double p(int i) const { return p_.at(static_cast<std::size_t>(i)); }
  double conjugate_of(int i) const { return conjugate(p(i)); }
  const std::array<double, 3>& values() const noexcept { return p_; }

 private:
  explicit ExponentTriple(std::array<double, 3> p) : p_(p) {}
  std::array<double, 3> p_;
};

class Frame2 {
 public:
  const std::array<Direction, 3>& directions() const noexcept { return directions_; }
  const std::array<double, 3>& weights() const noexcept { return weights_; }
  Direction direction(int i) const { return directions_.at(static_cast<std::size_t>(i)); }
  double weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }

  /// sum_i c_i u_i u_i^T assembled directly.
  Mat2 assembled() const;
  /// Frobenius norm of assembled() - Id.
  double residual() const;

  std::string describe() const;

 private:
  Frame2(std::array<Direction, 3> d, std::array<double, 3> c) : directions_(d), weights_(c) {}
  static Frame2 checked(std::array<Direction, 3> d, std::array<double, 3> c);

  friend Frame2 weights_from_directions(Direction, Direction, Direction);
  friend Frame2 directions_from_weights(double, double, double);
  friend Frame2 angles_from_exponents(const ExponentTriple&);
  friend Frame2 shannon_limit_frame(double);

  std::array<Direction, 3> directions_;
  std::array<double, 3> weights_;
};

/// Widths of the three angular sectors cut by the directions, ordered by the
/// sorted canonical angles: sector k runs from the k-th smallest angle to the
/// next one (the third wraps around through pi).
std::array<double, 3> sector_widths(Direction d1, Direction d2, Direction d3);

Frame2 weights_from_directions(Direction d1, Direction d2, Direction d3);
Frame2 directions_from_weights(double c1, double c2, double c3);
Frame2 angles_from_exponents(const ExponentTriple& t);

/// Frame of the Young exponents (p, q, r), 1/p + 1/q = 1 + 1/r, via the triple
/// (r', p, q).
Frame2 young_frame(double p, double q, double r);
ExponentTriple young_triple(double p, double q, double r);

/// Directions (s, pi/4, pi/2 - s) for s in (-pi/2, 0), s != -pi/4; as s -> 0- the frame
/// degenerates towards (e1, (e1+e2)/sqrt2, e2) with c2 -> 0.
Frame2 shannon_limit_frame(double s);

/// Three directions at mutual angle pi/3 with weights 2/3.
Frame2 mercedes_frame();

/// Angular distance between two directions, in [0, pi/2].
double direction_distance(Direction a, Direction b);

/// Max over i of direction distance and weight difference.
double frame_distance(const Frame2& a, const Frame2& b);

}  // namespace entroframe
