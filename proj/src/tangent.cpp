#include "affvis/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace affvis {

namespace {

constexpr const char* kModule = "tangent";

Vec2 normalized(Vec2 v) { return v / norm(v); }

// Rectangle of M_{x,r}(phi_w(hull)). With `tail` set, x = phi_w(tail) and the
// offsets are taken before applying A_w, which keeps full relative precision
// for deep words.
ApproxRect rect_of(const IFS& ifs, const ConvexPolygon& hull, const TangentFrame& frame, const Word& w,
                   std::optional<Vec2> tail) {
  if (!(frame.r > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "frame scale must be positive");
  const Cylinder cyl = cylinder(ifs, w);
  const SingularData& sd = cyl.sdata;
  ApproxRect rect;
  rect.word = w;
  rect.orientation = sd.theta1;
  rect.u1 = normalized(cyl.map.linear * sd.eta1);
  rect.u2 = normalized(cyl.map.linear * sd.eta2);

  double lo1 = std::numeric_limits<double>::infinity(), hi1 = -lo1, lo2 = lo1, hi2 = -lo1;
  std::vector<Vec2> img;
  for (const Vec2& z : hull.vertices) {
    double s1, s2;
    if (tail) {
      s1 = sd.alpha1 * dot(z - *tail, sd.eta1) / frame.r;
      s2 = sd.alpha2 * dot(z - *tail, sd.eta2) / frame.r;
    } else {
      const Vec2 y = frame(cyl.map(z));
      s1 = dot(y, rect.u1);
      s2 = dot(y, rect.u2);
    }
    lo1 = std::min(lo1, s1), hi1 = std::max(hi1, s1);
    lo2 = std::min(lo2, s2), hi2 = std::max(hi2, s2);
    img.push_back(s1 * rect.u1 + s2 * rect.u2);
  }
  if (convex_hull(img).distance(Vec2{}) > 1.0) {
    throw Error(kModule, ErrorCode::EmptyCylinderView, "the magnified cylinder misses the unit ball");
  }
  rect.lo1 = lo1, rect.hi1 = hi1, rect.lo2 = lo2, rect.hi2 = hi2;
  rect.h = hi1 - lo1;
  rect.v = hi2 - lo2;
  rect.center = 0.5 * (lo1 + hi1) * rect.u1 + 0.5 * (lo2 + hi2) * rect.u2;
  return rect;
}

// A point of E coded by the stream from position `start` on; the finite
// truncation is cut once the composed map is below 1e-18 in norm.
Vec2 coded_point(const IFS& ifs, const SymbolStream& s, std::size_t start) {
  AffineMap2 phi;
  double scale = 1.0;
  for (std::size_t k = start; k < start + 4096 && scale > 1e-18; ++k) {
    const Symbol sym = s.finite() && k >= s.prefix.size() ? s.prefix.back() : s.at(k);
    phi = compose(phi, ifs.map(sym));
    scale *= singular_data(ifs.map(sym).linear).alpha1;
  }
  return phi(ifs.base_point());
}

}  // namespace

PointCloud magnify(const PointCloud& cloud, const TangentFrame& frame) {
  if (!(frame.r > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "frame scale must be positive");
  PointCloud out;
  out.resolution = cloud.resolution / frame.r;
  for (const Vec2& p : cloud.points) {
    const Vec2 q = frame(p);
    if (dot(q, q) <= 1.0) out.points.push_back(q);
  }
  return out;
}

ApproxRect approx_rect(const IFS& ifs, const ConvexPolygon& hull, const TangentFrame& frame, const Word& w) {
  return rect_of(ifs, hull, frame, w, std::nullopt);
}

ApproxRect approx_rect(const IFS& ifs, const TangentFrame& frame, const Word& w, double delta) {
  return approx_rect(ifs, attractor_hull(ifs, delta), frame, w);
}

Symbol SymbolStream::at(std::size_t k) const {
  if (k < prefix.size()) return prefix[k];
  if (cycle.empty()) throw Error(kModule, ErrorCode::StreamExhausted, "finite symbol stream exhausted");
  return cycle[(k - prefix.size()) % cycle.size()];
}

Word SymbolStream::take(std::size_t n) const {
  Word w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = at(k);
  return w;
}

std::vector<TangentStep> tangent_sequence(const IFS& ifs, const SymbolStream& stream, std::size_t n_max, double c) {
  if (!(c > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "c must be positive");
  if (stream.prefix.empty() && stream.cycle.empty()) {
    throw Error(kModule, ErrorCode::StreamExhausted, "empty symbol stream");
  }
  validate_word(ifs, stream.prefix);
  validate_word(ifs, stream.cycle);
  const Word word = stream.take(n_max);
  const ConvexPolygon hull = attractor_hull(ifs, 1e-13);
  const Vec2 x = coded_point(ifs, stream, 0);

  std::vector<TangentStep> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const Word w(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(n));
    const Vec2 tail = coded_point(ifs, stream, n);
    const SingularData sd = cylinder(ifs, w).sdata;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec2& z : hull.vertices) {
      const double s = dot(z - tail, sd.eta2);
      lo = std::min(lo, s), hi = std::max(hi, s);
    }
    const double extent = hi > lo ? sd.alpha2 * (hi - lo) : sd.alpha2;
    TangentStep step;
    step.n = n;
    step.frame = {x, static_cast<double>(n) * extent / c};
    step.rect = rect_of(ifs, hull, step.frame, w, tail);
    out.push_back(std::move(step));
  }
  return out;
}

KakeyaSet kakeya_extract(const std::vector<ApproxRect>& rects, const KakeyaOptions& options) {
  KakeyaSet out;
  for (const ApproxRect& r : rects) {
    if (!(r.h > 2.0)) throw Error(kModule, ErrorCode::NoExit, "rectangle too short for a side to leave B(0,1)");
    // Distance from the origin to the short side at u1-coordinate s.
    const double off2 = r.lo2 > 0.0 ? r.lo2 : (r.hi2 < 0.0 ? -r.hi2 : 0.0);
    auto exits = [&](double s) { return std::hypot(s, off2) > 1.0; };
    const bool hi_out = exits(r.hi1), lo_out = exits(r.lo1);
    const double mid2 = 0.5 * (r.lo2 + r.hi2);
    bool forward = hi_out;
    if (hi_out && lo_out) forward = dot(r.u1, r.orientation.unit()) > 0.0;
    const Direction theta = Direction::from_vector(forward ? r.u1 : -r.u1);
    const Vec2 base = (forward ? r.lo1 : r.hi1) * r.u1 + mid2 * r.u2;

    bool merged = false;
    for (HalfLine& h : out.lines) {
      const double d = std::abs(wrap_angle(h.direction.angle() - theta.angle() + kPi, 2.0 * kPi) - kPi);
      if (d <= options.cluster_tol && norm(h.base - base) <= options.base_tol) {
        h = {base, theta};
        merged = true;
        break;
      }
    }
    if (!merged) out.lines.push_back({base, theta});
  }
  return out;
}

}  // namespace affvis
