#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "affvis/geometry.hpp"
#include "affvis/scenarios.hpp"

using namespace affvis;

namespace {

IFS two_map_ifs() {
  return IFS({{Mat2::diag(1.0 / 3, 0.5), {0.0, 0.0}}, {Mat2::diag(1.0 / 3, 0.5), {2.0 / 3, 0.75}}});
}

// Oracle: a point is in a convex polygon iff it is left of every edge.
bool inside_ccw(const std::vector<Vec2>& v, Vec2 p, double tol) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Vec2 a = v[k], b = v[(k + 1) % v.size()];
    if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
  }
  return true;
}

// Largest relative gap of the projections of pts onto u.
double relative_gap(const std::vector<Vec2>& pts, Vec2 u) {
  std::vector<double> s;
  for (const Vec2& p : pts) s.push_back(dot(p, u));
  std::sort(s.begin(), s.end());
  double g = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) g = std::max(g, s[k] - s[k - 1]);
  return g / (s.back() - s.front());
}

}  // namespace

TEST_CASE("convex hull by monotone chain") {
  const ConvexPolygon sq = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {1, 0.25}});
  REQUIRE(sq.vertices.size() == 4);
  double area = 0.0;
  for (std::size_t k = 0; k < 4; ++k) area += cross(sq.vertices[k], sq.vertices[(k + 1) % 4]);
  CHECK(area / 2 == doctest::Approx(1.0));
  CHECK(sq.support({1, 0}) == doctest::Approx(1.0));
  CHECK(sq.support({-1, -1}) == doctest::Approx(0.0));
  CHECK(sq.contains({0.3, 0.9}));
  CHECK_FALSE(sq.contains({1.1, 0.5}));
  CHECK(sq.distance({2.0, 0.5}) == doctest::Approx(1.0));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    std::vector<Vec2> pts(200);
    for (auto& p : pts) p = {g(rng), g(rng)};
    const ConvexPolygon h = convex_hull(pts);
    for (const Vec2& p : pts) CHECK(inside_ccw(h.vertices, p, 1e-12));
    for (std::size_t k = 0; k < h.vertices.size(); ++k) {
      const Vec2 a = h.vertices[k], b = h.vertices[(k + 1) % h.vertices.size()];
      const Vec2 c = h.vertices[(k + 2) % h.vertices.size()];
      CHECK(cross(b - a, c - b) > 0.0);
    }
  }
}

TEST_CASE("carpet hull") {
  const ConvexPolygon h = attractor_hull(carpet_ifs(), 1e-12);
  // Fixed points of f1, f3, f2.
  for (Vec2 p : {Vec2{0, 0}, Vec2{1, 0}, Vec2{0.5, 1}}) CHECK(h.contains(p, 1e-9));
  // (1,1) is not in E: the top of E is the single point (1/2, 1).
  CHECK_FALSE(h.contains({1.0, 1.0}, 1e-6));

  const PointCloud cloud = attractor_cloud(carpet_ifs(), std::ldexp(1.0, -10));
  const ConvexPolygon ch = convex_hull(cloud.points);
  CHECK(hausdorff_distance(h, ch) <= 1e-12 + std::ldexp(1.0, -10));
  for (const Vec2& p : cloud.points) CHECK(h.contains(p, 1e-9));
}

TEST_CASE("hull of a single map is its fixed point") {
  const IFS one({{Mat2{0.4, 0.1, 0.0, 0.3}, {1.0, 2.0}}});
  const ConvexPolygon h = attractor_hull(one, 1e-10);
  const Vec2 fp = one.map(0).fixed_point();
  for (const Vec2& v : h.vertices) CHECK(norm(v - fp) <= 1e-9);
}

TEST_CASE("hull of a random system against its cloud") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.25, 0.25), t(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<AffineMap2> maps;
    for (int k = 0; k < 3; ++k) maps.push_back({{u(rng) + 0.3, u(rng), u(rng), u(rng) + 0.3}, {t(rng), t(rng)}});
    const IFS ifs(maps);
    const ConvexPolygon h = attractor_hull(ifs, 1e-9);
    const PointCloud cloud = attractor_cloud(ifs, 4e-3);
    CHECK(hausdorff_distance(h, convex_hull(cloud.points)) <= 4e-3 + 1e-8);
  }
}

TEST_CASE("projection condition on the carpet") {
  const IFS ifs = carpet_ifs();
  const ProjectionResult r = projection_condition_check(ifs, Direction(-kPi / 4), 6);
  CHECK(r.passed);
  CHECK(r.depth == 6);
  CHECK(r.worst_gap <= r.gap_tol);
  try {
    projection_condition_check(ifs, Direction(-kPi / 2), 6);
    FAIL("vertical direction accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExceptionalDirection);
  }
}

TEST_CASE("projection condition fails for the two-map system") {
  const IFS ifs = two_map_ifs();
  const ProjectionResult r = projection_condition_check(ifs, Direction(-kPi / 4), 6);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_gap > r.gap_tol);

  // Oracle: project the image of a fine cloud under the worst cylinder onto
  // the direction perpendicular to e and look for the gap directly.
  const PointCloud cloud = attractor_cloud(ifs, 1.0 / 2048);
  const Cylinder c = cylinder(ifs, r.worst_word);
  std::vector<Vec2> img;
  for (const Vec2& p : cloud.points) img.push_back(c.map(p));
  const Vec2 u = perp(Direction(-kPi / 4).unit());
  CHECK(relative_gap(img, u) > r.gap_tol);
}

TEST_CASE("projection verdict is monotone in the gap tolerance") {
  const IFS ifs = two_map_ifs();
  ProjectionOptions o;
  const ProjectionContext ctx = make_projection_context(ifs, o);
  const ProjectionResult base = projection_condition_check(ifs, ctx, Direction(0.4), 5);
  ProjectionOptions loose = o;
  loose.gap_tol = 2.0 * base.worst_gap + 1e-9;
  const ProjectionContext lctx = make_projection_context(ifs, loose);
  CHECK(projection_condition_check(ifs, lctx, Direction(0.4), 5).passed);
  loose.gap_tol = 0.5 * base.worst_gap;
  const ProjectionContext tctx = make_projection_context(ifs, loose);
  CHECK_FALSE(projection_condition_check(ifs, tctx, Direction(0.4), 5).passed);
}

TEST_CASE("pullback consistency") {
  const IFS ifs = positive_cone_ifs();
  const ProjLine e(0.3);
  const Word i{0, 1, 1}, j{1, 0};
  const Mat2 ai = cylinder(ifs, i).map.linear, aj = cylinder(ifs, j).map.linear;
  Word ij = i;
  ij.insert(ij.end(), j.begin(), j.end());
  const Mat2 aij = cylinder(ifs, ij).map.linear;
  const ProjLine direct = proj_apply(aij.inverse(), e);
  const ProjLine stepwise = proj_apply(aj.inverse(), proj_apply(ai.inverse(), e));
  CHECK(proj_distance(direct, stepwise) < 1e-10);
}

TEST_CASE("direction scan") {
  const IFS ifs = carpet_ifs();
  const auto rows = direction_scan(ifs, 8, 4);
  REQUIRE(rows.size() == 8);
  std::size_t exceptional = 0;
  for (const ScanRow& r : rows) {
    CHECK(r.direction.angle() == doctest::Approx(2 * kPi * r.index / 8));
    const bool vertical = r.index == 2 || r.index == 6;
    CHECK(r.exceptional == vertical);
    exceptional += r.exceptional;
    if (!r.exceptional) CHECK(r.passed);
  }
  CHECK(exceptional == 2);

  // Near vertical the pulled-back direction needs more levels to turn: at
  // depth n it has slope (2/3)^n tan(theta). Failing rows must pass once
  // that slope is below 1/2.
  const auto many = direction_scan(ifs, 360, 5);
  std::size_t deeper = 0;
  for (const ScanRow& r : many) {
    if (r.exceptional || r.passed) continue;
    const double slope = std::abs(std::tan(r.direction.angle()));
    CHECK(slope > 2.0);
    std::size_t n = 5;
    while (std::pow(2.0 / 3.0, static_cast<double>(n)) * slope > 0.5) ++n;
    CHECK(projection_condition_check(ifs, r.direction, n).passed);
    ++deeper;
  }
  CHECK(deeper < 40);

  const IFS two = two_map_ifs();
  const auto d4 = direction_scan(two, 36, 4), d5 = direction_scan(two, 36, 5);
  std::size_t pass = 0, fail = 0;
  for (std::size_t k = 0; k < d4.size(); ++k) {
    if (d4[k].exceptional) continue;
    (d4[k].passed ? pass : fail) += 1;
    CHECK(d4[k].passed == d5[k].passed);
  }
  CHECK(pass > 0);
  CHECK(fail > 0);
}
