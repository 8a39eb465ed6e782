#include <doctest.h>

#include <cmath>
#include <random>

#include "affvis/regularity.hpp"
#include "affvis/scenarios.hpp"

using namespace affvis;

namespace {

const Cone kQuadrant{ProjLine(kPi / 4), kPi / 4};

double angle_of(Vec2 v) { return ProjLine::from_vector(v).angle(); }

// theta1 of A_w by explicit products and a closed-form eigenvector of
// A A^T (independent of singular_data).
double theta1_oracle(const IFS& ifs, const Word& w) {
  Mat2 a = Mat2::identity();
  for (Symbol s : w) {
    a = a * ifs.map(s).linear;
    const double f = std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
    a = (1.0 / f) * a;
  }
  const Mat2 b = a * a.transpose();
  // Major eigenvector of symmetric [[p, q], [q, r]] has angle atan2(2q, p - r) / 2.
  return ProjLine(0.5 * std::atan2(2.0 * b.a12, b.a11 - b.a22)).angle();
}

bool covered(const std::vector<AngularInterval>& cover, ProjLine l, double slack) {
  for (const auto& arc : cover) {
    if (arc.contains(l, slack)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("angular intervals") {
  const AngularInterval wrap{3.0, 0.5};
  CHECK(wrap.contains(ProjLine(3.1)));
  CHECK(wrap.contains(ProjLine(0.2)));
  CHECK_FALSE(wrap.contains(ProjLine(0.5)));
  CHECK(wrap.distance(ProjLine(0.5)) == doctest::Approx(0.5 - (3.5 - kPi)));
  const auto merged = merge_intervals({{0.1, 0.2}, {0.25, 0.2}, {1.0, 0.1}});
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].lo == doctest::Approx(0.1));
  CHECK(merged[0].hi() == doctest::Approx(0.45));
  CHECK(disjoint({0.1, 0.2}, {0.5, 0.1}, 1e-9));
  CHECK_FALSE(disjoint({0.1, 0.2}, {0.3, 0.1}, 1e-9));
  CHECK(strictly_inside({0.2, 0.1}, {0.1, 0.5}, 1e-9));
  // Image of an arc: endpoints mapped as vectors.
  const Mat2 m{2.0, 1.0, 1.0, 1.0};
  const AngularInterval img = image_interval(m, {0.0, kPi / 2});
  CHECK(img.lo == doctest::Approx(std::atan2(1.0, 2.0)));
  CHECK(img.hi() == doctest::Approx(kPi / 4));
}

TEST_CASE("domination of the carpet is exact") {
  const DominationReport r = domination_report(carpet_ifs(), 8);
  REQUIRE(r.level_min.size() == 8);
  for (double v : r.level_min) CHECK(v == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(r.tau_fit == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(r.verdict);
  CHECK(r.verified_depth == 8);
}

TEST_CASE("duplicated map has the same tau") {
  const AffineMap2 f{Mat2::diag(1.0 / 3, 0.5), {}};
  const DominationReport r = domination_report(IFS({f, f}), 6);
  CHECK(r.tau_fit == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(r.verdict);
}

TEST_CASE("a quarter turn destroys domination") {
  const Mat2 d = Mat2::diag(0.5, 0.25);
  const IFS ifs({{Mat2::rotation(kPi / 2) * d, {}}, {d, {1.0, 0.0}}});
  // Oracle: brute force over all words of length <= 6.
  double worst = 1e300;
  for (int n = 1; n <= 6; ++n) {
    for (int code = 0; code < (1 << n); ++code) {
      Mat2 a = Mat2::identity();
      for (int k = 0; k < n; ++k) a = a * ifs.map((code >> k) & 1).linear;
      const SingularData sd = singular_data(a);
      worst = std::min(worst, std::pow(sd.alpha1 / sd.alpha2, 1.0 / n));
    }
  }
  CHECK(worst < 1.01);
  CHECK_FALSE(domination_report(ifs, 6).verdict);
  CHECK_FALSE(invariant_cone_search(ifs, 6).has_value());
}

TEST_CASE("invariant cones") {
  const auto carpet = invariant_cone_search(carpet_ifs(), 6);
  REQUIRE(carpet.has_value());
  CHECK(carpet->arc().contains(ProjLine(kPi / 2)));
  // Oracle: diag(1/3, 1/2) sends tan(theta) to (3/2) tan(theta), toward vertical.
  for (double end : {carpet->arc().lo, carpet->arc().hi()}) {
    const double img = std::atan2(0.5 * std::sin(end), std::cos(end) / 3.0);
    CHECK(carpet->arc().distance(ProjLine(img)) == 0.0);
    CHECK(proj_distance(ProjLine(img), ProjLine(kPi / 2)) < proj_distance(ProjLine(end), ProjLine(kPi / 2)));
  }
  CHECK(cone_is_invariant(carpet_ifs(), Cone{ProjLine(kPi / 2), kPi / 4}));

  const auto pos = invariant_cone_search(positive_cone_ifs(), 6);
  REQUIRE(pos.has_value());
  CHECK(cone_is_invariant(positive_cone_ifs(), *pos));
  CHECK(cone_is_invariant(positive_cone_ifs(), kQuadrant));
}

TEST_CASE("strong cone separation") {
  const SeparationResult carpet = strong_cone_separation_check(carpet_ifs(), Cone{ProjLine(kPi / 2), kPi / 4});
  CHECK_FALSE(carpet.passed);
  CHECK(carpet.failure == SeparationFailure::Overlap);
  CHECK_FALSE(carpet.witness.empty());

  const SeparationResult pos = strong_cone_separation_check(positive_cone_ifs(), kQuadrant);
  CHECK(pos.passed);
  // Hand images: A1 sends (1,0), (0,1) to (4,1), (2,1); A2 to (1,2), (1,4).
  REQUIRE(pos.images.size() == 2);
  CHECK(pos.images[0].lo == doctest::Approx(angle_of({4, 1})));
  CHECK(pos.images[0].hi() == doctest::Approx(angle_of({2, 1})));
  CHECK(pos.images[1].lo == doctest::Approx(angle_of({1, 2})));
  CHECK(pos.images[1].hi() == doctest::Approx(angle_of({1, 4})));

  // [[2,1],[1,1]] and [[3,1],[2,1]] both send (0,1) to (1,1): the images touch.
  const IFS touching({{0.25 * Mat2{2, 1, 1, 1}, {}}, {0.2 * Mat2{3, 1, 2, 1}, {1, 0}}});
  const SeparationResult t = strong_cone_separation_check(touching, kQuadrant);
  CHECK_FALSE(t.passed);
  CHECK(t.failure == SeparationFailure::Overlap);

  try {
    strong_cone_separation_check(carpet_ifs(), Cone{ProjLine(0.0), kPi / 2});
    FAIL("improper cone accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ImproperCone);
  }
}

TEST_CASE("orientation cover of the carpet is one interval around vertical") {
  const auto cone = invariant_cone_search(carpet_ifs(), 6);
  REQUIRE(cone);
  const auto cover = orientation_cover(carpet_ifs(), 1e-3, *cone);
  REQUIRE(cover.size() == 1);
  CHECK(cover[0].contains(ProjLine(kPi / 2)));
  CHECK(cover[0].width <= 1e-3);
  const auto whole = orientation_cover(carpet_ifs(), 10.0, *cone);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0].lo == doctest::Approx(cone->arc().lo));
  CHECK(whole[0].width == doctest::Approx(cone->arc().width));
  CHECK_THROWS_AS(orientation_cover(carpet_ifs(), 1e-3, Cone{ProjLine(0.0), 0.1}), Error);
}

TEST_CASE("orientation cover of the positive pair") {
  const IFS ifs = positive_cone_ifs();
  const auto coarse = orientation_cover(ifs, 1e-2, kQuadrant);
  const auto fine = orientation_cover(ifs, 1e-3, kQuadrant);
  CHECK(coarse.size() >= 2);
  for (std::size_t k = 1; k < coarse.size(); ++k) CHECK(coarse[k].lo > coarse[k - 1].hi());
  // Nesting: every fine interval sits inside a coarse one.
  for (const auto& f : fine) {
    bool inside = false;
    for (const auto& c : coarse) inside = inside || strictly_inside(f, c, -1e-12);
    CHECK(inside);
  }
  // Limit orientations of long random words land in the cover.
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    Word w(40);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 2);
    CHECK(covered(fine, ProjLine(theta1_oracle(ifs, w)), 1e-9));
  }
  CHECK_THROWS_AS(orientation_cover(ifs, 1e-6, kQuadrant, 100), Error);
}

TEST_CASE("limit orientations") {
  const DistortionConstants cc = distortion_constants(carpet_ifs(), Cone{ProjLine(kPi / 2), kPi / 4});
  for (std::size_t n : {2u, 5u, 20u}) {
    const LimitOrientation lo = limit_orientation(carpet_ifs(), {1, 2}, n, cc);
    CHECK(lo.line.angle() == doctest::Approx(kPi / 2));
  }

  const IFS ifs = positive_cone_ifs();
  const DistortionConstants dc = distortion_constants(ifs, kQuadrant);
  const LimitOrientation l12 = limit_orientation(ifs, {0}, 12, dc);
  const LimitOrientation l24 = limit_orientation(ifs, {0}, 24, dc);
  CHECK(proj_distance(l12.line, l24.line) <= l12.error_bound);
  CHECK(l24.error_bound < l12.error_bound);

  // A_i theta1(j) = theta1(ij).
  const Word i{1, 0}, j{0, 1, 1};
  const LimitOrientation inner = limit_orientation(ifs, j, 20, dc);
  Word ij = i;
  ij.insert(ij.end(), j.begin(), j.end());
  const LimitOrientation outer = limit_orientation(ifs, ij, 22, dc);
  const Mat2 ai = ifs.map(1).linear * ifs.map(0).linear;
  const ProjLine pushed = proj_apply(ai, inner.line);
  // A_i contracts angles in the cone, so the inner bound carries over.
  CHECK(proj_distance(pushed, outer.line) <= inner.error_bound + outer.error_bound);
  // Against the explicit product.
  CHECK(proj_distance(outer.line, ProjLine(theta1_oracle(ifs, extend_word(ij, 22)))) < 1e-9);
}

TEST_CASE("distortion constants") {
  const DistortionConstants dc = distortion_constants(positive_cone_ifs(), kQuadrant);
  CHECK(dc.delta_sep > 0.0);
  CHECK(dc.M >= 1.0);
  CHECK(dc.M * dc.delta_sep >= kPi - dc.delta_sep - 1e-12);
  CHECK(dc.M >= 1.0 / std::pow(std::sin(dc.delta_sep / 2), 2) - 1e-9);
}

TEST_CASE("distortion sandwich for the positive pair") {
  const DistortionReport r = distortion_check(positive_cone_ifs(), kQuadrant, 10000, 8, 1);
  CHECK(r.samples == 10000);
  CHECK(r.violations == 0);
  REQUIRE(r.k0.has_value());
  CHECK(*r.k0 <= 8);
  CHECK(r.min_normalized >= 1.0 / r.constants.M - 1e-9);
  CHECK(r.max_normalized <= r.constants.M * r.constants.M + 1e-9);
}

TEST_CASE("distortion sandwich for diagonal words from tangent coordinates") {
  const Cone vertical{ProjLine(kPi / 2), kPi / 4};
  const DistortionConstants dc = distortion_constants(carpet_ifs(), vertical);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> near(kPi / 2 - 0.3, kPi / 2 + 0.3);
  for (int n = 1; n <= 10; ++n) {
    const double r = std::pow(2.0 / 3.0, n);
    for (int t = 0; t < 200; ++t) {
      const double a = near(rng), b = near(rng);
      if (std::abs(a - b) < 1e-6) continue;
      // Horizontal slope cot(theta) is multiplied by (2/3)^n under diag(3^-n, 2^-n).
      const double ia = std::atan2(1.0, r / std::tan(a) * 1.0);
      const double ib = std::atan2(1.0, r / std::tan(b) * 1.0);
      const double ratio = proj_distance(ProjLine(ia), ProjLine(ib)) / proj_distance(ProjLine(a), ProjLine(b));
      CHECK(ratio >= r / dc.M * (1 - 1e-9));
      CHECK(ratio <= dc.M * dc.M * r * (1 + 1e-9));
    }
  }
}

TEST_CASE("porosity") {
  const PorosityReport p = porosity_gap(positive_cone_ifs(), kQuadrant, 6);
  REQUIRE(p.level_min_gap.size() == 6);
  CHECK(p.min_gap > 0.0);
  CHECK(p.spread <= p.M3);
  CHECK(p.lower_bound > 0.0);
  // Level-1 gap by hand: between atan(1/2) and atan(2).
  CHECK(p.first_level_gap == doctest::Approx(std::atan(2.0) - std::atan(0.5)).epsilon(1e-9));

  try {
    porosity_gap(carpet_ifs(), Cone{ProjLine(kPi / 2), kPi / 4}, 3);
    FAIL("carpet has no gap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGap);
  }
  const IFS one({{0.125 * Mat2{4, 2, 1, 1}, {}}});
  CHECK_THROWS_AS(porosity_gap(one, kQuadrant, 3), Error);
}
