#include "affvis/linalg2.hpp"

#include <cfloat>

#include "affvis/error.hpp"

namespace affvis {

double wrap_angle(double a, double period) {
  double r = a - period * std::floor(a / period);
  if (r >= period || r < 0.0) r = 0.0;
  return r;
}

Mat2 Mat2::rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0 || !std::isfinite(d)) {
    throw Error("linalg2", ErrorCode::SingularInput, "matrix is not invertible");
  }
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

bool Mat2::is_finite() const {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

Vec2 AffineMap2::fixed_point() const {
  // (I - A) p = t
  const Mat2 i_minus_a{1.0 - linear.a11, -linear.a12, -linear.a21, 1.0 - linear.a22};
  return i_minus_a.inverse() * translation;
}

double proj_distance(ProjLine a, ProjLine b) {
  const double d = std::abs(a.angle() - b.angle());
  return std::min(d, kPi - d);
}

SingularData singular_data(const Mat2& m) {
  const double frob2 = m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22;
  const double d = m.det();
  if (!m.is_finite() || !(std::abs(d) > 64.0 * DBL_EPSILON * frob2)) {
    throw Error("linalg2", ErrorCode::SingularInput, "determinant below machine-scaled threshold");
  }
  return singular_data(m, d);
}

SingularData singular_data(const Mat2& m, double det) {
  if (!m.is_finite() || det == 0.0 || !std::isfinite(det)) {
    throw Error("linalg2", ErrorCode::SingularInput, "matrix is not invertible");
  }
  // A^T A = [[p, q], [q, r]]
  const double p = m.a11 * m.a11 + m.a21 * m.a21;
  const double r = m.a12 * m.a12 + m.a22 * m.a22;
  const double q = m.a11 * m.a12 + m.a21 * m.a22;
  const double half_diff = 0.5 * (p - r);
  const double disc = std::hypot(half_diff, q);
  const double lambda1 = 0.5 * (p + r) + disc;

  SingularData s;
  s.alpha1 = std::sqrt(lambda1);
  s.alpha2 = std::abs(det) / s.alpha1;
  if (s.alpha2 > s.alpha1) s.alpha2 = s.alpha1;

  if (disc <= 4.0 * DBL_EPSILON * lambda1) {
    // Isotropic: any axis is a singular axis; pick theta1 horizontal.
    const Mat2 inv = m.inverse();
    const Vec2 e1 = inv * Vec2{1.0, 0.0};
    s.eta1 = e1 / norm(e1);
    s.eta2 = perp(s.eta1);
    s.theta1 = ProjLine(0.0);
    s.theta2 = ProjLine(kPi / 2);
    return s;
  }

  const double phi = 0.5 * std::atan2(2.0 * q, p - r);
  s.eta1 = unit_vector(phi);
  s.eta2 = perp(s.eta1);
  s.theta1 = ProjLine::from_vector(m * s.eta1);
  // A eta2 is tiny for dominated products; orthogonality is exact in theory.
  s.theta2 = ProjLine(s.theta1.angle() + kPi / 2);
  return s;
}

ProjLine proj_apply(const Mat2& m, ProjLine l) {
  const Vec2 w = m * l.unit();
  if (!(w.x != 0.0 || w.y != 0.0) || !std::isfinite(w.x) || !std::isfinite(w.y)) {
    throw Error("linalg2", ErrorCode::SingularInput, "projective image undefined");
  }
  return ProjLine::from_vector(w);
}

}  // namespace affvis
