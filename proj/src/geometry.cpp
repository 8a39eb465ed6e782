#include "affvis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "affvis/parallel.hpp"

namespace affvis {

namespace {

constexpr const char* kModule = "geometry";

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

double ConvexPolygon::support(Vec2 u) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& v : vertices) best = std::max(best, dot(v, u));
  return best;
}

double ConvexPolygon::distance(Vec2 p) const {
  const std::size_t n = vertices.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) return norm(p - vertices.front());
  if (n == 2) return segment_distance(p, vertices[0], vertices[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = vertices[i];
    const Vec2 b = vertices[(i + 1) % n];
    if (cross(b - a, p - a) < 0.0) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

ConvexPolygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return {pts};

  double scale = 0.0;
  for (const Vec2& p : pts) scale = std::max({scale, std::abs(p.x - pts.front().x), std::abs(p.y - pts.front().y)});
  // Turn must be strictly left beyond a tolerance relative to the edge lengths.
  auto left = [](Vec2 o, Vec2 a, Vec2 b) {
    const Vec2 u = a - o, v = b - o;
    return cross(u, v) > 1e-12 * norm(u) * norm(v);
  };

  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && !left(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && !left(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && norm(h[1] - h[0]) <= 1e-15 * scale) h.resize(1);
  return {h};
}

double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b) {
  double d = 0.0;
  for (const Vec2& v : a.vertices) d = std::max(d, b.distance(v));
  for (const Vec2& v : b.vertices) d = std::max(d, a.distance(v));
  return d;
}

namespace {

// Drops vertices lying within tol of the chord between their neighbours.
// Each removal moves the boundary by at most tol.
ConvexPolygon thin(ConvexPolygon p, double tol) {
  auto& v = p.vertices;
  if (v.size() <= 3) return p;
  std::vector<Vec2> kept{v.front()};
  for (std::size_t k = 1; k < v.size(); ++k) {
    const Vec2 a = kept.back(), b = v[k], c = v[(k + 1) % v.size()];
    const double len = norm(c - a);
    if (len > 0.0 && std::abs(cross(c - a, b - a)) / len < tol && kept.size() + v.size() - k > 3) continue;
    kept.push_back(b);
  }
  if (kept.size() >= 3) v = std::move(kept);
  return p;
}

}  // namespace

ConvexPolygon attractor_hull(const IFS& ifs, double eps, std::size_t budget) {
  if (!(eps > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "eps must be positive");
  double alpha = 0.0;
  for (const auto& m : ifs.maps()) alpha = std::max(alpha, singular_data(m.linear).alpha1);

  const Ball ball = invariant_ball(ifs);
  std::vector<Vec2> start;
  constexpr int kSides = 16;
  const double circ = ball.radius / std::cos(kPi / kSides);
  for (int k = 0; k < kSides; ++k) start.push_back(ball.center + circ * unit_vector(2.0 * kPi * k / kSides));
  ConvexPolygon cur = convex_hull(start);

  for (std::size_t iter = 0; iter < 100'000; ++iter) {
    std::vector<Vec2> pts;
    pts.reserve(cur.vertices.size() * ifs.size());
    for (const auto& m : ifs.maps()) {
      for (const Vec2& v : cur.vertices) pts.push_back(m(v));
    }
    if (pts.size() > budget) throw Error(kModule, ErrorCode::Budget, "hull iteration exceeds budget");
    ConvexPolygon next = thin(convex_hull(std::move(pts)), 0.1 * eps * (1.0 - alpha));
    const double drift = hausdorff_distance(cur, next);
    cur = std::move(next);
    if (alpha * drift <= eps * (1.0 - alpha)) return cur;
  }
  throw Error(kModule, ErrorCode::Budget, "hull iteration did not converge");
}

ProjectionContext make_projection_context(const IFS& ifs, const ProjectionOptions& options) {
  ProjectionContext ctx;
  ctx.options = options;
  CloudOptions co;
  co.budget = options.budget;
  ctx.cloud = attractor_cloud(ifs, options.cloud_delta, co);
  if (const auto cone = invariant_cone_search(ifs, 6)) {
    ctx.cover = orientation_cover(ifs, options.cover_eps, *cone, options.budget);
  }
  return ctx;
}

bool is_exceptional(const ProjectionContext& ctx, Direction e) {
  for (const auto& arc : ctx.cover) {
    if (arc.distance(e.carrier()) < ctx.options.margin) return true;
  }
  return false;
}

namespace {

// Largest gap of the cloud projected onto the normal of `line`, relative to
// the projected span; also returns the span.
std::pair<double, double> projected_gap(const std::vector<Vec2>& pts, Vec2 line, std::vector<double>& scratch) {
  const Vec2 n = perp(line);
  scratch.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) scratch[i] = dot(pts[i], n);
  std::sort(scratch.begin(), scratch.end());
  double gap = 0.0;
  for (std::size_t i = 1; i < scratch.size(); ++i) gap = std::max(gap, scratch[i] - scratch[i - 1]);
  const double span = scratch.empty() ? 0.0 : scratch.back() - scratch.front();
  return {span > 0.0 ? gap / span : 0.0, span};
}

}  // namespace

ProjectionResult projection_condition_check(const IFS& ifs, const ProjectionContext& ctx, Direction e,
                                            std::size_t depth) {
  if (is_exceptional(ctx, e)) {
    throw Error(kModule, ErrorCode::ExceptionalDirection,
                "direction is within the margin of the limit-orientation cover");
  }
  ProjectionResult res;
  res.depth = depth;

  // Distinct pulled-back lines; the representative word is the first one met.
  std::set<long long> seen;
  std::vector<std::pair<Vec2, Word>> lines;
  Word w(depth, 0);
  std::vector<Mat2> inv(depth + 1, Mat2::identity());
  const Vec2 carrier = e.unit();
  std::size_t checked = 0;
  std::vector<std::size_t> digit(depth, 0);
  std::size_t pos = 0;
  while (true) {
    for (; pos < depth; ++pos) {
      w[pos] = static_cast<Symbol>(digit[pos]);
      // (A_w)^-1 = A_{w_n}^-1 ... A_{w_1}^-1, so pulled-back products grow on the left.
      Mat2 m = ifs.map(digit[pos]).linear.inverse() * inv[pos];
      const double s = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
      inv[pos + 1] = (1.0 / s) * m;
    }
    const Vec2 v = inv[depth] * carrier;
    const double ang = ProjLine::from_vector(v).angle();
    if (seen.insert(std::llround(ang * 1e12)).second) lines.emplace_back(v / norm(v), w);
    if (++checked > ctx.options.budget) throw Error(kModule, ErrorCode::Budget, "too many words");
    std::size_t p = depth;
    while (p > 0 && digit[p - 1] + 1 == ifs.size()) digit[--p] = 0;
    if (p == 0) break;
    ++digit[p - 1];
    pos = p - 1;
  }
  res.directions = lines.size();

  std::vector<double> gaps(lines.size()), spans(lines.size());
  parallel_chunks(
      lines.size(),
      [&](std::size_t b, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t i = b; i < end; ++i) {
          std::tie(gaps[i], spans[i]) = projected_gap(ctx.cloud.points, lines[i].first, scratch);
        }
      },
      1);

  res.passed = true;
  double tol_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double tol = ctx.options.gap_tol > 0.0 ? ctx.options.gap_tol
                                                  : (spans[i] > 0.0 ? 3.0 * ctx.cloud.resolution / spans[i] : 1.0);
    tol_min = std::min(tol_min, tol);
    if (i == 0 || gaps[i] > res.worst_gap) {
      res.worst_gap = gaps[i];
      res.worst_word = lines[i].second;
    }
    if (gaps[i] > tol) res.passed = false;
  }
  res.gap_tol = tol_min;
  return res;
}

ProjectionResult projection_condition_check(const IFS& ifs, Direction e, std::size_t depth,
                                            const ProjectionOptions& options) {
  return projection_condition_check(ifs, make_projection_context(ifs, options), e, depth);
}

std::vector<ScanRow> direction_scan(const IFS& ifs, std::size_t n_dirs, std::size_t depth,
                                    const ProjectionOptions& options) {
  if (n_dirs < 4) throw Error(kModule, ErrorCode::InvalidArgument, "need at least 4 directions");
  const ProjectionContext ctx = make_projection_context(ifs, options);
  std::vector<ScanRow> rows(n_dirs);
  for (std::size_t k = 0; k < n_dirs; ++k) {
    ScanRow& r = rows[k];
    r.index = k;
    r.direction = Direction(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_dirs));
    r.exceptional = is_exceptional(ctx, r.direction);
    if (r.exceptional) continue;
    const ProjectionResult pr = projection_condition_check(ifs, ctx, r.direction, depth);
    r.passed = pr.passed;
    r.worst_gap = pr.worst_gap;
  }
  return rows;
}

}  // namespace affvis
