#pragma once

// Planar linear algebra and projective-line geometry.
//
// Everything here is a small value type. Angles are double-precision radians;
// lines through the origin (ProjLine) live in [0, pi), unit directions
// (Direction) in [0, 2 pi).

#include <cmath>
#include <numbers>

namespace affvis {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Angle between the lines spanned by u and v, in [0, pi/2]. Computed from the
/// cross product so tiny angles keep full relative precision.
inline double line_angle(Vec2 u, Vec2 v) {
  return std::atan2(std::abs(cross(u, v)), std::abs(dot(u, v)));
}

/// Floored modulo into [0, period).
double wrap_angle(double a, double period);

struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 rotation(double angle);

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }
  /// Throws Error(SingularInput) when the determinant vanishes.
  Mat2 inverse() const;
  bool is_finite() const;

  friend constexpr Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a11 * n.a11 + m.a12 * n.a21, m.a11 * n.a12 + m.a12 * n.a22,
            m.a21 * n.a11 + m.a22 * n.a21, m.a21 * n.a12 + m.a22 * n.a22};
  }
  friend constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// x -> linear * x + translation.
struct AffineMap2 {
  Mat2 linear;
  Vec2 translation;

  constexpr Vec2 operator()(Vec2 p) const { return linear * p + translation; }
  /// Unique fixed point; requires I - linear invertible (true for contractions).
  Vec2 fixed_point() const;
  friend constexpr bool operator==(const AffineMap2&, const AffineMap2&) = default;
};

/// (f o g)(x) = f(g(x)).
constexpr AffineMap2 compose(const AffineMap2& f, const AffineMap2& g) {
  return {f.linear * g.linear, f.linear * g.translation + f.translation};
}

/// A line through the origin, represented by its angle in [0, pi).
class ProjLine {
 public:
  constexpr ProjLine() = default;
  explicit ProjLine(double angle) : angle_(wrap_angle(angle, kPi)) {}
  static ProjLine from_vector(Vec2 v) { return ProjLine(std::atan2(v.y, v.x)); }

  double angle() const { return angle_; }
  Vec2 unit() const { return unit_vector(angle_); }

 private:
  double angle_ = 0.0;
};

/// Distance in P^1: the angle between two lines, in [0, pi/2].
double proj_distance(ProjLine a, ProjLine b);

/// A unit vector e in S^1, represented by its angle in [0, 2 pi).
class Direction {
 public:
  constexpr Direction() = default;
  explicit Direction(double angle) : angle_(wrap_angle(angle, 2.0 * kPi)) {}
  static Direction from_vector(Vec2 v) { return Direction(std::atan2(v.y, v.x)); }

  double angle() const { return angle_; }
  Vec2 unit() const { return unit_vector(angle_); }
  ProjLine carrier() const { return ProjLine(angle_); }
  Direction opposite() const { return Direction(angle_ + kPi); }

 private:
  double angle_ = 0.0;
};

/// Singular values and the associated axes of a 2x2 map A.
///
/// alpha1 >= alpha2 are the semiaxes of A(B(0,1)); eta1, eta2 are the unit
/// eigenvectors of A^T A; theta1 = <A eta1> and theta2 = <A eta2> are the
/// orientations of the long and short semiaxes.
struct SingularData {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  ProjLine theta1;
  ProjLine theta2{kPi / 2};
  Vec2 eta1{1.0, 0.0};
  Vec2 eta2{0.0, 1.0};
};

/// Closed-form singular data. Isotropic maps (alpha1 == alpha2 up to rounding)
/// report theta1 = horizontal. Throws Error(SingularInput) if det is
/// negligible relative to the entries.
SingularData singular_data(const Mat2& m);

/// Same, with the determinant supplied by the caller (e.g. a product of
/// factor determinants). Needed for long products where alpha2/alpha1 is
/// below machine epsilon and det() from the entries is pure rounding noise.
SingularData singular_data(const Mat2& m, double det);

/// Image line m(<v>) = <m v>.
ProjLine proj_apply(const Mat2& m, ProjLine l);

}  // namespace affvis
