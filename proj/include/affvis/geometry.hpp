#pragma once

// Convex hull of the attractor and the projection condition.

#include <optional>
#include <vector>

#include "affvis/regularity.hpp"
#include "affvis/symbolic.hpp"

namespace affvis {

/// Counterclockwise, collinear vertices removed. One vertex for a point,
/// two for a segment.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  /// max over vertices of <v, u>.
  double support(Vec2 u) const;
  /// Distance from p to the polygon (0 inside).
  double distance(Vec2 p) const;
  bool contains(Vec2 p, double tol = 1e-12) const { return distance(p) <= tol; }
};

/// Monotone chain; collinear points dropped with relative cross tolerance 1e-12.
ConvexPolygon convex_hull(std::vector<Vec2> points);

double hausdorff_distance(const ConvexPolygon& a, const ConvexPolygon& b);

/// Iterates K <- hull(union phi_i(K)) from an enclosing polygon until the
/// polygon is within eps of hull(E).
ConvexPolygon attractor_hull(const IFS& ifs, double eps = 1e-12, std::size_t budget = default_budget());

struct ProjectionOptions {
  /// Resolution of the attractor cloud that gets projected.
  double cloud_delta = 1.0 / 512;
  /// Largest allowed gap relative to the projected span; <= 0 means 3 delta / span.
  double gap_tol = 0.0;
  /// Directions closer than this to the orientation cover are exceptional.
  double margin = 1e-3;
  /// Width of the cover intervals used for the exceptional test.
  double cover_eps = 1e-3;
  std::size_t budget = default_budget();
};

/// Cloud and orientation cover shared by many direction checks.
struct ProjectionContext {
  PointCloud cloud;
  /// Empty when no invariant cone was found (no direction is then flagged).
  std::vector<AngularInterval> cover;
  ProjectionOptions options;
};

ProjectionContext make_projection_context(const IFS& ifs, const ProjectionOptions& options = {});

struct ProjectionResult {
  bool passed = false;
  /// Largest projected gap relative to the span, over the tested words.
  double worst_gap = 0.0;
  double gap_tol = 0.0;
  Word worst_word;
  /// Verdicts are certified to this depth only.
  std::size_t depth = 0;
  /// Number of distinct pulled-back directions actually projected.
  std::size_t directions = 0;
};

bool is_exceptional(const ProjectionContext& ctx, Direction e);

/// For every word of length `depth`, projects the attractor along
/// A_w^-1 carrier(e) and requires the largest gap to stay within gap_tol.
/// Throws Error(ExceptionalDirection) when carrier(e) is near the cover.
ProjectionResult projection_condition_check(const IFS& ifs, const ProjectionContext& ctx, Direction e,
                                            std::size_t depth);
ProjectionResult projection_condition_check(const IFS& ifs, Direction e, std::size_t depth,
                                            const ProjectionOptions& options = {});

struct ScanRow {
  std::size_t index = 0;
  Direction direction;
  bool exceptional = false;
  bool passed = false;
  double worst_gap = 0.0;
};

/// Uniform grid of n_dirs directions over [0, 2 pi).
std::vector<ScanRow> direction_scan(const IFS& ifs, std::size_t n_dirs, std::size_t depth,
                                    const ProjectionOptions& options = {});

}  // namespace affvis
