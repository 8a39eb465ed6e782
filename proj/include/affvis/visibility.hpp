#pragma once

// Visible parts at resolution delta: an occlusion sweep over a rotated grid,
// a quadratic brute-force reference, and lower envelopes of Kakeya-type sets.

#include <cstdint>
#include <optional>
#include <vector>

#include "affvis/symbolic.hpp"

namespace affvis {

struct Cell {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

/// Cell (i, j) is origin + [i delta, (i+1) delta) x [j delta, (j+1) delta).
struct OccupancyGrid {
  double delta = 0.0;
  Vec2 origin;
  /// Sorted, unique.
  std::vector<Cell> cells;

  Vec2 center(const Cell& c) const {
    return origin + Vec2{(static_cast<double>(c.i) + 0.5) * delta, (static_cast<double>(c.j) + 0.5) * delta};
  }
};

/// Cells containing at least one cloud point. Throws Error(InvalidArgument)
/// if delta is finer than the cloud resolution.
OccupancyGrid rasterize(const PointCloud& cloud, double delta, Vec2 origin = {});

/// Grid of a raw point set (no resolution check).
OccupancyGrid rasterize_points(const std::vector<Vec2>& points, double delta, Vec2 origin = {});

/// Coordinates (u, w) of p in the frame rotated so that e becomes (0, -1).
Vec2 to_view_frame(Vec2 p, Direction e);
Vec2 from_view_frame(Vec2 q, Direction e);

/// First-hit cells: cell centres are re-binned into delta-columns of the
/// rotated frame and, per column, the cells of minimal row are kept (ties
/// kept). Output is a subset of the input grid.
OccupancyGrid visible_sweep(const OccupancyGrid& grid, Direction e);

/// Same rule applied to raw points with column/row width delta; returns the
/// kept points in input order.
std::vector<Vec2> visible_sweep(const std::vector<Vec2>& points, Direction e, double delta);

/// p is kept unless some q has |<q - p, e_perp>| <= delta/2 and
/// <q - p, e> > delta/2. Quadratic; throws Error(Budget) above 10^4 points.
PointCloud visible_bruteforce(const PointCloud& cloud, Direction e, double delta);

/// Half line {base} + [0, inf) direction.
struct HalfLine {
  Vec2 base;
  Direction direction;
};

struct KakeyaSet {
  std::vector<HalfLine> lines;
};

enum class EnvelopeKind { Lipschitz, SemiDecreasing, SemiIncreasing };

const char* to_string(EnvelopeKind k);

struct EnvelopePiece {
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  /// Index into the Kakeya set.
  std::size_t line = 0;
};

struct Breakpoint {
  double x = 0.0;
  /// f(x) itself and the one-sided limits (equal where f is continuous).
  double value = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// Lower envelope f(x) = min{ y : (x, y) in family } in the rotated frame.
struct EnvelopeFn {
  EnvelopeKind kind = EnvelopeKind::Lipschitz;
  double L = 0.0;
  double lo = 0.0, hi = 0.0;
  std::vector<EnvelopePiece> pieces;
  std::vector<Breakpoint> breakpoints;
  /// Abscissas where f jumps.
  std::vector<double> jumps;
  std::size_t family_size = 0;

  double operator()(double x) const;
  /// Largest violation of the defining inequality over all breakpoint pairs
  /// (one-sided limits included); <= 0 means it holds.
  double semimonotone_defect() const;
};

struct EnvelopeOptions {
  /// Smallest allowed angle between a carrier and carrier(e).
  double beta_min = 1e-3;
  /// Abscissa window; defaults to [-gamma, gamma] with gamma = sin(beta)/2.
  std::optional<std::pair<double, double>> window;
};

struct EnvelopeResult {
  double beta = 0.0;
  double L = 0.0;
  double gamma = 0.0;
  double lo = 0.0, hi = 0.0;
  /// Families in the order T, R, L; empty families are omitted.
  std::vector<EnvelopeFn> envelopes;
  /// Interior endpoints of the envelope domains and all jump abscissas, sorted.
  std::vector<double> exceptional;
};

/// Rotates e to (0, -1) and splits the lines meeting B(0, gamma) into chords
/// through the unit disc (T), right-going (R) and left-going (L) half lines
/// based inside it. Throws Error(DirectionInCone) if some carrier is within
/// beta_min of carrier(e).
EnvelopeResult visible_envelope(const KakeyaSet& k, Direction e, const EnvelopeOptions& options = {});

}  // namespace affvis
