#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "affvis/scenarios.hpp"
#include "affvis/visibility.hpp"

using namespace affvis;

namespace {

bool same_points(std::vector<Vec2> a, std::vector<Vec2> b) {
  auto less = [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

// Height of a half line above abscissa x in the view frame, or NaN if the
// line does not reach x (for R/L) or leaves the unit disc there (for T).
double height(const HalfLine& h, Direction e, EnvelopeKind kind, double x) {
  const Vec2 b = to_view_frame(h.base, e);
  const Vec2 d = to_view_frame(h.direction.unit(), e) - to_view_frame({0, 0}, e);
  const double y = b.y + (x - b.x) * d.y / d.x;
  switch (kind) {
    case EnvelopeKind::SemiDecreasing:
      return x >= b.x ? y : std::nan("");
    case EnvelopeKind::SemiIncreasing:
      return x <= b.x ? y : std::nan("");
    case EnvelopeKind::Lipschitz:
      return x * x + y * y <= 1.0 ? y : std::nan("");
  }
  return std::nan("");
}

}  // namespace

TEST_CASE("rasterize") {
  PointCloud c{{{0.05, 0.05}, {0.07, 0.02}, {0.35, 0.95}, {-0.01, 0.0}}, 0.01};
  const OccupancyGrid g = rasterize(c, 0.1);
  REQUIRE(g.cells.size() == 3);
  CHECK(g.cells[0] == Cell{-1, 0});
  CHECK(g.cells[1] == Cell{0, 0});
  CHECK(g.cells[2] == Cell{3, 9});
  CHECK(g.center(g.cells[2]).x == doctest::Approx(0.35));
  CHECK_THROWS_AS(rasterize(c, 0.001), Error);

  const OccupancyGrid shifted = rasterize_points(c.points, 0.1, {-0.05, -0.05});
  CHECK(shifted.cells.front() == Cell{0, 0});
}

TEST_CASE("view frame") {
  const Direction down(-kPi / 2);
  const Vec2 p{0.3, -0.7};
  CHECK(norm(to_view_frame(p, down) - p) < 1e-15);
  const Vec2 q = to_view_frame({1.0, 0.0}, Direction(0.0));
  CHECK(q.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q.y == doctest::Approx(-1.0));

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ang(0.0, 2 * kPi);
  for (int t = 0; t < 200; ++t) {
    const Direction e(ang(rng));
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    CHECK(norm(from_view_frame(to_view_frame(a, e), e) - a) < 1e-13);
    CHECK(norm(to_view_frame(a, e) - to_view_frame(b, e)) == doctest::Approx(norm(a - b)));
    // Moving along e lowers the row coordinate.
    const Vec2 ahead = to_view_frame(a + e.unit(), e) - to_view_frame(a, e);
    CHECK(ahead.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ahead.y == doctest::Approx(-1.0));
  }
}

TEST_CASE("four corners seen along the x axis") {
  const std::vector<Vec2> corners{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::vector<Vec2> expected{{1, 0}, {1, 1}};
  CHECK(same_points(visible_sweep(corners, Direction(0.0), 0.1), expected));
  CHECK(same_points(visible_bruteforce({corners, 0.1}, Direction(0.0), 0.1).points, expected));
  // Looking the other way; points off the column edges so rounding cannot
  // move them between columns.
  const std::vector<Vec2> mid{{0, 0.05}, {1, 0.05}, {0, 1.05}, {1, 1.05}};
  CHECK(same_points(visible_sweep(mid, Direction(kPi), 0.1), {{0, 0.05}, {0, 1.05}}));
}

TEST_CASE("grid sweep along an axis keeps the first cell of each column") {
  const PointCloud cloud = attractor_cloud(carpet_ifs(), 1.0 / 512);
  const OccupancyGrid g = rasterize(cloud, 1.0 / 128);
  const OccupancyGrid vis = visible_sweep(g, Direction(-kPi / 2));
  std::map<std::int64_t, std::int64_t> lowest;
  for (const Cell& c : g.cells) {
    auto [it, fresh] = lowest.emplace(c.i, c.j);
    if (!fresh) it->second = std::min(it->second, c.j);
  }
  REQUIRE(vis.cells.size() == lowest.size());
  for (const Cell& c : vis.cells) CHECK(lowest.at(c.i) == c.j);

  // Along +x the last cell of each row survives.
  const OccupancyGrid right = visible_sweep(g, Direction(0.0));
  std::map<std::int64_t, std::int64_t> last;
  for (const Cell& c : g.cells) last[c.j] = std::max(last[c.j], c.i);
  REQUIRE(right.cells.size() == last.size());
  for (const Cell& c : right.cells) CHECK(last.at(c.j) == c.i);
}

TEST_CASE("grid sweep returns a subset") {
  const PointCloud cloud = attractor_cloud(carpet_ifs(), 1.0 / 256);
  const OccupancyGrid g = rasterize(cloud, 1.0 / 64);
  for (double a : {0.3, 1.0, 2.5, 4.0, 5.9}) {
    const OccupancyGrid vis = visible_sweep(g, Direction(a));
    CHECK(!vis.cells.empty());
    CHECK(std::includes(g.cells.begin(), g.cells.end(), vis.cells.begin(), vis.cells.end()));
  }
}

TEST_CASE("point sweep agrees with brute force on lattice clouds") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::uniform_int_distribution<int> lat(-12, 12);
  for (int t = 0; t < 30; ++t) {
    const Direction e(ang(rng));
    const double delta = 0.05;
    std::vector<Vec2> pts;
    for (int k = 0; k < 150; ++k) {
      const Vec2 q{(lat(rng) + 0.5) * delta, (lat(rng) + 0.5) * delta};
      pts.push_back(from_view_frame(q, e));
    }
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const auto fast = visible_sweep(pts, e, delta);
    const auto slow = visible_bruteforce({pts, delta}, e, delta).points;
    CHECK(same_points(fast, slow));
  }
  std::vector<Vec2> big(10001, Vec2{});
  CHECK_THROWS_AS(visible_bruteforce({big, 1.0}, Direction(0.0), 1.0), Error);
}

TEST_CASE("envelope of two right-going lines") {
  // e points down, so the view frame is the identity.
  const Direction e(-kPi / 2);
  const KakeyaSet k{{{{-0.1, 0.2}, Direction(0.3)}, {{0.05, 0.0}, Direction(0.6)}}};
  const EnvelopeResult r = visible_envelope(k, e);
  CHECK(r.beta == doctest::Approx(kPi / 2 - 0.6));
  CHECK(r.gamma == doctest::Approx(std::sin(kPi / 2 - 0.6) / 2));
  REQUIRE(r.envelopes.size() == 1);
  const EnvelopeFn& f = r.envelopes[0];
  CHECK(f.kind == EnvelopeKind::SemiDecreasing);
  CHECK(f.lo == doctest::Approx(-0.1));
  CHECK(f.hi == doctest::Approx(r.gamma));
  REQUIRE(f.jumps.size() == 1);
  CHECK(f.jumps[0] == doctest::Approx(0.05));
  // Before the jump only the first line; after it the second is lower up to
  // their crossing at x = 0.2651/0.3754, outside the window.
  CHECK(f(0.0) == doctest::Approx(0.2 + 0.1 * std::tan(0.3)));
  CHECK(f(0.3) == doctest::Approx(0.25 * std::tan(0.6)));
  CHECK(f.semimonotone_defect() <= 1e-12);
  REQUIRE(r.exceptional.size() == 2);
  CHECK(r.exceptional[0] == doctest::Approx(-0.1));
  CHECK(r.exceptional[1] == doctest::Approx(0.05));
}

TEST_CASE("envelope rejects lines parallel to the view") {
  const KakeyaSet k{{{{0.0, 0.0}, Direction(kPi / 2 + 1e-4)}}};
  try {
    visible_envelope(k, Direction(-kPi / 2));
    FAIL("expected DirectionInCone");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DirectionInCone);
  }
  CHECK_THROWS_AS(visible_envelope({}, Direction(0.0)), Error);
}

TEST_CASE("random envelopes against a pointwise minimum") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0), spread(-0.6, 0.6);
  std::size_t checked = 0;
  for (int t = 0; t < 40; ++t) {
    KakeyaSet k;
    for (int n = 0; n < 12; ++n) k.lines.push_back({{1.2 * u(rng), 1.2 * u(rng)}, Direction(spread(rng))});
    const Direction e(kPi / 2 + 0.2 * u(rng));
    const EnvelopeResult r = visible_envelope(k, e);
    for (const EnvelopeFn& f : r.envelopes) {
      CHECK(f.semimonotone_defect() <= 1e-9 * (1 + f.L * (f.hi - f.lo)));
      for (std::size_t p = 1; p < f.pieces.size(); ++p) CHECK(f.pieces[p - 1].x1 <= f.pieces[p].x0 + 1e-12);
      for (int s = 0; s < 50; ++s) {
        const double x = f.lo + (f.hi - f.lo) * (s + 0.37) / 50;
        const auto piece = std::find_if(f.pieces.begin(), f.pieces.end(),
                                        [x](const EnvelopePiece& q) { return q.x0 <= x && x <= q.x1; });
        REQUIRE(piece != f.pieces.end());
        const double fx = f(x);
        CHECK(fx == doctest::Approx(height(k.lines[piece->line], e, f.kind, x)).epsilon(1e-9));
        // No line used anywhere in this envelope is lower at x.
        for (const EnvelopePiece& q : f.pieces) {
          const double y = height(k.lines[q.line], e, f.kind, x);
          if (!std::isnan(y)) CHECK(fx <= y + 1e-9);
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}
