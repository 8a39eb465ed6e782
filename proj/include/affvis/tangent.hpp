#pragma once

// Magnifications M_{x,r}, approximating rectangles, tangent sequences along
// an infinite word, and extraction of Kakeya-type structure.

#include <optional>
#include <vector>

#include "affvis/geometry.hpp"
#include "affvis/visibility.hpp"

namespace affvis {

/// M_{x,r}(y) = (y - x) / r.
struct TangentFrame {
  Vec2 center;
  double r = 1.0;

  Vec2 operator()(Vec2 y) const { return (y - center) / r; }
};

/// Magnified cloud clipped to the closed unit ball; resolution becomes delta/r.
PointCloud magnify(const PointCloud& cloud, const TangentFrame& frame);

/// Smallest rectangle with sides along theta1(w), theta2(w) containing
/// M_{x,r}(E_w), in magnified coordinates. The rectangle is
/// { lo1 <= <p, u1> <= hi1, lo2 <= <p, u2> <= hi2 }.
struct ApproxRect {
  Vec2 center;
  ProjLine orientation;
  Vec2 u1, u2;
  double lo1 = 0.0, hi1 = 0.0;
  double lo2 = 0.0, hi2 = 0.0;
  /// Side along u1 (long) and along u2 (short).
  double h = 0.0, v = 0.0;
  Word word;
};

/// Rectangle from the attractor hull (its support function equals that of
/// any fine cloud). Throws Error(EmptyCylinderView) when the magnified
/// cylinder misses B(0, 1).
ApproxRect approx_rect(const IFS& ifs, const ConvexPolygon& hull, const TangentFrame& frame, const Word& w);
ApproxRect approx_rect(const IFS& ifs, const TangentFrame& frame, const Word& w, double delta);

/// An infinite word: prefix followed by `cycle` repeated forever. An empty
/// cycle makes the stream finite.
struct SymbolStream {
  Word prefix;
  Word cycle;

  bool finite() const { return cycle.empty(); }
  /// Throws Error(StreamExhausted) past the end of a finite stream.
  Symbol at(std::size_t k) const;
  Word take(std::size_t n) const;
};

struct TangentStep {
  std::size_t n = 0;
  TangentFrame frame;
  ApproxRect rect;
};

/// For n = 1..n_max: i_n = s|n and x_n = the point coded by s. The scale
/// r_n = n * (theta2-extent of E_{i_n}) / c puts alpha2(i_n) ~ c r_n / n, so
/// v_n = c / n and h_n grows like the singular-value ratio over n.
std::vector<TangentStep> tangent_sequence(const IFS& ifs, const SymbolStream& stream, std::size_t n_max,
                                          double c = 1.0);

struct KakeyaOptions {
  /// Directions closer than this (and with base points within base_tol)
  /// are one cluster; its deepest member is kept.
  double cluster_tol = 1e-2;
  double base_tol = 5e-2;
};

/// One half line per rectangle: from the midpoint of a short side that stays
/// near the unit ball toward the short side outside it. Throws Error(NoExit)
/// if some rectangle has h <= 2.
KakeyaSet kakeya_extract(const std::vector<ApproxRect>& rects, const KakeyaOptions& options = {});

}  // namespace affvis
