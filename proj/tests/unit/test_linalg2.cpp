#include <doctest.h>

#include <cmath>
#include <random>

#include "affvis/error.hpp"
#include "affvis/linalg2.hpp"

using namespace affvis;

namespace {

// Oracle: brute-force max/min of |m v| over a fine sweep of unit vectors.
std::pair<double, double> sampled_extremes(const Mat2& m, int n = 20000) {
  double lo = 1e300, hi = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = kPi * k / n;
    const double len = norm(m * Vec2{std::cos(t), std::sin(t)});
    lo = std::min(lo, len), hi = std::max(hi, len);
  }
  return {lo, hi};
}

Mat2 random_invertible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Mat2 m{u(rng), u(rng), u(rng), u(rng)};
    if (std::abs(m.det()) > 0.05) return m;
  }
}

}  // namespace

TEST_CASE("singular values of a diagonal map") {
  const SingularData sd = singular_data(Mat2::diag(1.0 / 3, 0.5));
  CHECK(sd.alpha1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sd.alpha2 == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(sd.theta1.angle() == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(proj_distance(sd.theta1, sd.theta2) == doctest::Approx(kPi / 2));
}

TEST_CASE("isotropic map uses the horizontal convention") {
  const SingularData sd = singular_data(0.5 * Mat2::identity());
  CHECK(sd.alpha1 == doctest::Approx(0.5));
  CHECK(sd.alpha2 == doctest::Approx(0.5));
  CHECK(sd.theta1.angle() == doctest::Approx(0.0));
  CHECK(std::abs(dot(sd.eta1, sd.eta2)) < 1e-15);
}

TEST_CASE("shear singular values against a hand-solved characteristic polynomial") {
  const Mat2 shear{1.0, 1.0, 0.0, 1.0};
  // A^T A = [[1,1],[1,2]]: eigenvalues (3 +- sqrt 5) / 2.
  const double golden = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
  const SingularData sd = singular_data(shear);
  CHECK(sd.alpha1 == doctest::Approx(golden).epsilon(1e-14));
  CHECK(sd.alpha2 == doctest::Approx(1.0 / golden).epsilon(1e-14));
  const auto [lo, hi] = sampled_extremes(shear);
  CHECK(sd.alpha1 == doctest::Approx(hi).epsilon(1e-6));
  CHECK(sd.alpha2 == doctest::Approx(lo).epsilon(1e-6));
}

TEST_CASE("random matrices satisfy the singular data invariants") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int t = 0; t < 200; ++t) {
    const Mat2 m = random_invertible(rng);
    const SingularData sd = singular_data(m);
    REQUIRE(sd.alpha1 >= sd.alpha2);
    CHECK(norm(m * sd.eta1) == doctest::Approx(sd.alpha1).epsilon(1e-12));
    CHECK(norm(m * sd.eta2) == doctest::Approx(sd.alpha2).epsilon(1e-12));
    CHECK(std::abs(dot(sd.eta1, sd.eta2)) < 1e-12);
    CHECK(sd.alpha1 * sd.alpha2 == doctest::Approx(std::abs(m.det())).epsilon(1e-12));
    // theta1 is the direction of the long semiaxis of m(B(0,1)).
    CHECK(proj_distance(sd.theta1, ProjLine::from_vector(m * sd.eta1)) < 1e-12);
    const double tol = 1e-9 * sd.alpha1;
    for (int k = 0; k < 500; ++k) {
      const double len = norm(m * unit_vector(ang(rng)));
      CHECK(len <= sd.alpha1 + tol);
      CHECK(len >= sd.alpha2 - tol);
    }
  }
}

TEST_CASE("singular input is rejected") {
  CHECK_THROWS_AS(singular_data(Mat2{1.0, 2.0, 2.0, 4.0}), Error);
  try {
    singular_data(Mat2{0.0, 0.0, 0.0, 0.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularInput);
    CHECK(e.qualified_code() == "linalg2.SingularInput");
  }
}

TEST_CASE("projective action") {
  CHECK(proj_apply(Mat2::identity(), ProjLine(1.234)).angle() == doctest::Approx(1.234));
  CHECK(proj_apply(Mat2::diag(1.0 / 3, 0.5), ProjLine(0.0)).angle() == doctest::Approx(0.0));
  // The vector (1, 1) maps to (1/3, 1/2).
  CHECK(proj_apply(Mat2::diag(1.0 / 3, 0.5), ProjLine(kPi / 4)).angle() ==
        doctest::Approx(std::atan2(0.5, 1.0 / 3)).epsilon(1e-14));
  CHECK(std::atan2(0.5, 1.0 / 3) == doctest::Approx(0.98279).epsilon(1e-5));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  for (int t = 0; t < 500; ++t) {
    const Mat2 a = random_invertible(rng), b = random_invertible(rng);
    const ProjLine l(ang(rng));
    CHECK(proj_distance(proj_apply(a * b, l), proj_apply(a, proj_apply(b, l))) < 1e-12);
  }
}

TEST_CASE("projective distance") {
  CHECK(proj_distance(ProjLine(0.0), ProjLine(0.0)) == 0.0);
  CHECK(proj_distance(ProjLine(0.0), ProjLine(kPi / 2)) == doctest::Approx(kPi / 2));
  // Oracle: minimum over representatives a - b + k pi.
  auto oracle = [](double a, double b) {
    double best = 1e300;
    for (int k = -2; k <= 2; ++k) best = std::min(best, std::abs(a - b + k * kPi));
    return best;
  };
  CHECK(proj_distance(ProjLine(0.1), ProjLine(3.0)) == doctest::Approx(oracle(0.1, 3.0)));
  CHECK(oracle(0.1, 3.0) == doctest::Approx(0.24159).epsilon(1e-4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-10.0, 10.0);
  for (int t = 0; t < 1000; ++t) {
    const double a = ang(rng), b = ang(rng), c = ang(rng);
    const double ab = proj_distance(ProjLine(a), ProjLine(b));
    CHECK(ab == doctest::Approx(proj_distance(ProjLine(b), ProjLine(a))));
    CHECK(ab <= kPi / 2 + 1e-15);
    CHECK(ab <= proj_distance(ProjLine(a), ProjLine(c)) + proj_distance(ProjLine(c), ProjLine(b)) + 1e-12);
  }
}

TEST_CASE("directions and carriers") {
  const Direction e(-kPi / 2);
  CHECK(e.angle() == doctest::Approx(3 * kPi / 2));
  CHECK(e.carrier().angle() == doctest::Approx(kPi / 2));
  CHECK(proj_distance(Direction(0.3).carrier(), Direction(0.3 + kPi).carrier()) < 1e-15);
  CHECK(ProjLine(-0.1).angle() == doctest::Approx(kPi - 0.1));
}

TEST_CASE("composition of affine maps") {
  const AffineMap2 g{{0.2, 0.1, -0.3, 0.4}, {0.5, -1.0}};
  CHECK(compose(AffineMap2{}, g) == g);
  const AffineMap2 t1{Mat2::identity(), {1.0, 2.0}}, t2{Mat2::identity(), {-0.5, 4.0}};
  CHECK(compose(t1, t2).translation == Vec2{0.5, 6.0});

  const AffineMap2 f1{Mat2::diag(1.0 / 3, 0.5), {0.0, 0.0}};
  const AffineMap2 f3{Mat2::diag(1.0 / 3, 0.5), {2.0 / 3, 0.0}};
  const AffineMap2 h = compose(f1, f3);
  CHECK(h.linear.a11 == doctest::Approx(1.0 / 9));
  CHECK(h.linear.a22 == doctest::Approx(0.25));
  CHECK(h.translation.x == doctest::Approx(2.0 / 9));
  CHECK(h.translation.y == doctest::Approx(0.0));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const AffineMap2 a{random_invertible(rng), {u(rng), u(rng)}};
    const AffineMap2 b{random_invertible(rng), {u(rng), u(rng)}};
    const AffineMap2 c{random_invertible(rng), {u(rng), u(rng)}};
    const Vec2 p{u(rng), u(rng)};
    const Vec2 direct = a(b(p));
    CHECK(norm(compose(a, b)(p) - direct) < 1e-12);
    CHECK(norm(compose(compose(a, b), c)(p) - compose(a, compose(b, c))(p)) < 1e-12);
    CHECK(singular_data(compose(a, b).linear).alpha1 <=
          singular_data(a.linear).alpha1 * singular_data(b.linear).alpha1 * (1 + 1e-12));
  }
}

TEST_CASE("fixed point and inverse") {
  const AffineMap2 f2{Mat2::diag(1.0 / 3, 0.5), {1.0 / 3, 0.5}};
  const Vec2 p = f2.fixed_point();
  CHECK(p.x == doctest::Approx(0.5));
  CHECK(p.y == doctest::Approx(1.0));
  const Mat2 m{2.0, 1.0, 1.0, 1.0};
  const Mat2 id = m * m.inverse();
  CHECK(id.a11 == doctest::Approx(1.0));
  CHECK(id.a12 == doctest::Approx(0.0));
  CHECK(id.a21 == doctest::Approx(0.0));
  CHECK(id.a22 == doctest::Approx(1.0));
}
