#include "affvis/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "affvis/parallel.hpp"

namespace affvis {

namespace {

constexpr const char* kModule = "visibility";

std::int64_t floor_index(double v, double delta) { return static_cast<std::int64_t>(std::floor(v / delta)); }

// Rotation taking e to (0, -1).
struct ViewFrame {
  double c, s;
  explicit ViewFrame(Direction e) {
    const double phi = -0.5 * kPi - e.angle();
    c = std::cos(phi);
    s = std::sin(phi);
  }
  Vec2 to(Vec2 p) const { return {c * p.x - s * p.y, s * p.x + c * p.y}; }
  Vec2 from(Vec2 q) const { return {c * q.x + s * q.y, -s * q.x + c * q.y}; }
};

// Per column the minimal row over (column, row) pairs.
std::unordered_map<std::int64_t, std::int64_t> column_minima(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& cr) {
  std::unordered_map<std::int64_t, std::int64_t> best;
  best.reserve(cr.size());
  for (const auto& [col, row] : cr) {
    auto [it, fresh] = best.try_emplace(col, row);
    if (!fresh && row < it->second) it->second = row;
  }
  return best;
}

}  // namespace

Vec2 to_view_frame(Vec2 p, Direction e) { return ViewFrame(e).to(p); }
Vec2 from_view_frame(Vec2 q, Direction e) { return ViewFrame(e).from(q); }

OccupancyGrid rasterize_points(const std::vector<Vec2>& points, double delta, Vec2 origin) {
  if (!(delta > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "delta must be positive");
  OccupancyGrid g;
  g.delta = delta;
  g.origin = origin;
  g.cells.reserve(points.size());
  for (const Vec2& p : points)
    g.cells.push_back({floor_index(p.x - origin.x, delta), floor_index(p.y - origin.y, delta)});
  std::sort(g.cells.begin(), g.cells.end());
  g.cells.erase(std::unique(g.cells.begin(), g.cells.end()), g.cells.end());
  return g;
}

OccupancyGrid rasterize(const PointCloud& cloud, double delta, Vec2 origin) {
  if (delta < cloud.resolution) {
    throw Error(kModule, ErrorCode::InvalidArgument, "grid delta is finer than the cloud resolution");
  }
  return rasterize_points(cloud.points, delta, origin);
}

OccupancyGrid visible_sweep(const OccupancyGrid& grid, Direction e) {
  const ViewFrame f(e);
  std::vector<std::pair<std::int64_t, std::int64_t>> cr(grid.cells.size());
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    const Vec2 q = f.to(grid.center(grid.cells[k]));
    cr[k] = {floor_index(q.x, grid.delta), floor_index(q.y, grid.delta)};
  }
  const auto best = column_minima(cr);
  OccupancyGrid out{grid.delta, grid.origin, {}};
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    if (best.at(cr[k].first) == cr[k].second) out.cells.push_back(grid.cells[k]);
  }
  return out;
}

std::vector<Vec2> visible_sweep(const std::vector<Vec2>& points, Direction e, double delta) {
  if (!(delta > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "delta must be positive");
  const ViewFrame f(e);
  std::vector<std::pair<std::int64_t, std::int64_t>> cr(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Vec2 q = f.to(points[k]);
    cr[k] = {floor_index(q.x, delta), floor_index(q.y, delta)};
  }
  const auto best = column_minima(cr);
  std::vector<Vec2> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (best.at(cr[k].first) == cr[k].second) out.push_back(points[k]);
  }
  return out;
}

PointCloud visible_bruteforce(const PointCloud& cloud, Direction e, double delta) {
  const std::size_t n = cloud.points.size();
  if (n > 10'000) throw Error(kModule, ErrorCode::Budget, "brute-force visibility is limited to 10^4 points");
  const Vec2 u = e.unit();
  const Vec2 v = perp(u);
  std::vector<char> keep(n, 1);
  parallel_for(
      n,
      [&](std::size_t a) {
        const Vec2 p = cloud.points[a];
        for (const Vec2& q : cloud.points) {
          const Vec2 d = q - p;
          if (std::abs(dot(d, v)) <= 0.5 * delta && dot(d, u) > 0.5 * delta) {
            keep[a] = 0;
            return;
          }
        }
      },
      64);
  PointCloud out;
  out.resolution = cloud.resolution;
  for (std::size_t a = 0; a < n; ++a) {
    if (keep[a]) out.points.push_back(cloud.points[a]);
  }
  return out;
}

const char* to_string(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::Lipschitz: return "lipschitz";
    case EnvelopeKind::SemiDecreasing: return "semi-decreasing";
    case EnvelopeKind::SemiIncreasing: return "semi-increasing";
  }
  return "?";
}

double EnvelopeFn::operator()(double x) const {
  for (const Breakpoint& b : breakpoints) {
    if (b.x == x) return b.value;
  }
  auto it =
      std::upper_bound(pieces.begin(), pieces.end(), x, [](double v, const EnvelopePiece& p) { return v < p.x1; });
  if (it == pieces.end() || x < it->x0) return std::numeric_limits<double>::quiet_NaN();
  const double t = it->x1 > it->x0 ? (x - it->x0) / (it->x1 - it->x0) : 0.0;
  return it->y0 + t * (it->y1 - it->y0);
}

double EnvelopeFn::semimonotone_defect() const {
  struct Sample {
    double x, y;
  };
  std::vector<Sample> s;
  for (const Breakpoint& b : breakpoints) {
    s.push_back({b.x, b.value});
    if (b.left != b.value) s.push_back({b.x, b.left});
    if (b.right != b.value) s.push_back({b.x, b.right});
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (const Sample& a : s) {
    for (const Sample& b : s) {
      if (!(a.x < b.x)) continue;
      const double rise = b.y - a.y;
      const double run = b.x - a.x;
      double d = 0.0;
      switch (kind) {
        case EnvelopeKind::SemiDecreasing: d = rise - L * run; break;
        case EnvelopeKind::SemiIncreasing: d = -rise - L * run; break;
        case EnvelopeKind::Lipschitz: d = std::abs(rise) - L * run; break;
      }
      worst = std::max(worst, d);
    }
  }
  return s.size() < 2 ? 0.0 : worst;
}

namespace {

struct Segment {
  double x0, x1;  // closed domain
  double ax, ay;  // a point on the carrier
  double slope;
  std::size_t line;
  double at(double x) const { return ay + slope * (x - ax); }
};

EnvelopeFn lower_envelope(const std::vector<Segment>& segs, EnvelopeKind kind, double L) {
  EnvelopeFn fn;
  fn.kind = kind;
  fn.L = L;
  fn.family_size = segs.size();
  fn.lo = std::numeric_limits<double>::infinity();
  fn.hi = -std::numeric_limits<double>::infinity();
  std::vector<double> crit;
  double scale = 1.0;
  for (const Segment& s : segs) {
    fn.lo = std::min(fn.lo, s.x0);
    fn.hi = std::max(fn.hi, s.x1);
    crit.push_back(s.x0);
    crit.push_back(s.x1);
    scale = std::max({scale, std::abs(s.at(s.x0)), std::abs(s.at(s.x1))});
  }
  for (std::size_t a = 0; a < segs.size(); ++a) {
    for (std::size_t b = a + 1; b < segs.size(); ++b) {
      const double ds = segs[a].slope - segs[b].slope;
      if (ds == 0.0) continue;
      const double x = (segs[b].at(0.0) - segs[a].at(0.0)) / ds;
      const double lo = std::max(segs[a].x0, segs[b].x0), hi = std::min(segs[a].x1, segs[b].x1);
      if (x > lo && x < hi) crit.push_back(x);
    }
  }
  std::sort(crit.begin(), crit.end());
  crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

  auto argmin_at = [&](double x) {
    std::size_t best = segs.size();
    double y = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (x < segs[k].x0 || x > segs[k].x1) continue;
      const double v = segs[k].at(x);
      if (v < y) y = v, best = k;
    }
    return std::make_pair(best, y);
  };

  for (std::size_t c = 0; c + 1 < crit.size(); ++c) {
    const double a = crit[c], b = crit[c + 1];
    const auto [k, y] = argmin_at(0.5 * (a + b));
    if (k == segs.size()) continue;
    if (!fn.pieces.empty() && fn.pieces.back().line == segs[k].line && fn.pieces.back().x1 == a) {
      fn.pieces.back().x1 = b;
      fn.pieces.back().y1 = segs[k].at(b);
    } else {
      fn.pieces.push_back({a, b, segs[k].at(a), segs[k].at(b), segs[k].line});
    }
  }

  // Breakpoints at every piece boundary, with the closed-domain minimum and
  // the one-sided limits of the neighbouring pieces.
  std::vector<double> xs;
  for (const auto& p : fn.pieces) {
    xs.push_back(p.x0);
    xs.push_back(p.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const double tol = 1e-12 * scale;
  std::size_t pi = 0;
  for (double x : xs) {
    Breakpoint bp;
    bp.x = x;
    bp.value = argmin_at(x).second;
    bp.left = bp.right = bp.value;
    while (pi < fn.pieces.size() && fn.pieces[pi].x1 < x) ++pi;
    if (pi < fn.pieces.size() && fn.pieces[pi].x1 == x) {
      bp.left = fn.pieces[pi].y1;
      if (pi + 1 < fn.pieces.size() && fn.pieces[pi + 1].x0 == x) bp.right = fn.pieces[pi + 1].y0;
    } else if (pi < fn.pieces.size() && fn.pieces[pi].x0 == x) {
      bp.right = fn.pieces[pi].y0;
    }
    const bool interior = x > fn.lo && x < fn.hi;
    if (interior && (std::abs(bp.left - bp.value) > tol || std::abs(bp.right - bp.value) > tol)) {
      fn.jumps.push_back(x);
    }
    fn.breakpoints.push_back(bp);
  }
  return fn;
}

}  // namespace

EnvelopeResult visible_envelope(const KakeyaSet& k, Direction e, const EnvelopeOptions& options) {
  if (k.lines.empty()) throw Error(kModule, ErrorCode::InvalidArgument, "empty Kakeya set");
  if (k.lines.size() > 4000) throw Error(kModule, ErrorCode::Budget, "envelope is limited to 4000 lines");
  const ViewFrame f(e);
  EnvelopeResult res;
  res.beta = kPi / 2;
  struct Rotated {
    Vec2 b, d;
  };
  std::vector<Rotated> rot;
  for (const HalfLine& h : k.lines) {
    const Rotated r{f.to(h.base), f.to(h.direction.unit())};
    res.beta = std::min(res.beta, line_angle(r.d, Vec2{0.0, 1.0}));
    rot.push_back(r);
  }
  if (res.beta < options.beta_min) {
    throw Error(kModule, ErrorCode::DirectionInCone, "a line of the set is too close to the viewing direction");
  }
  res.L = 1.0 / std::tan(res.beta);
  res.gamma = 0.5 * std::sin(res.beta);
  std::tie(res.lo, res.hi) = options.window.value_or(std::make_pair(-res.gamma, res.gamma));

  std::vector<Segment> fam[3];
  for (std::size_t n = 0; n < rot.size(); ++n) {
    const auto [b, d] = rot[n];
    // Distance from the origin to the half line.
    const double tstar = std::max(0.0, -dot(b, d));
    if (norm(b + tstar * d) > res.gamma) continue;
    const double slope = d.y / d.x;
    if (dot(b, b) >= 1.0) {
      // Based outside the unit disc: only the chord inside it counts.
      const double bd = dot(b, d);
      const double root = std::sqrt(std::max(0.0, bd * bd - dot(b, b) + 1.0));
      const double xa = b.x + (-bd - root) * d.x, xb = b.x + (-bd + root) * d.x;
      const double x0 = std::max(res.lo, std::min(xa, xb)), x1 = std::min(res.hi, std::max(xa, xb));
      if (x0 <= x1) fam[0].push_back({x0, x1, b.x, b.y, slope, n});
    } else if (d.x > 0.0) {
      if (b.x <= res.hi) fam[1].push_back({std::max(res.lo, b.x), res.hi, b.x, b.y, slope, n});
    } else {
      if (b.x >= res.lo) fam[2].push_back({res.lo, std::min(res.hi, b.x), b.x, b.y, slope, n});
    }
  }
  const EnvelopeKind kinds[3] = {EnvelopeKind::Lipschitz, EnvelopeKind::SemiDecreasing, EnvelopeKind::SemiIncreasing};
  for (int t = 0; t < 3; ++t) {
    if (fam[t].empty()) continue;
    EnvelopeFn fn = lower_envelope(fam[t], kinds[t], res.L);
    if (fn.lo > res.lo) res.exceptional.push_back(fn.lo);
    if (fn.hi < res.hi) res.exceptional.push_back(fn.hi);
    res.exceptional.insert(res.exceptional.end(), fn.jumps.begin(), fn.jumps.end());
    res.envelopes.push_back(std::move(fn));
  }
  std::sort(res.exceptional.begin(), res.exceptional.end());
  res.exceptional.erase(std::unique(res.exceptional.begin(), res.exceptional.end()), res.exceptional.end());
  return res;
}

}  // namespace affvis
