#pragma once

// Box counting over scale ladders, log-log fits, and a heuristic Assouad
// estimator.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "affvis/visibility.hpp"

namespace affvis {

/// delta_k = delta0 * factor^-k for k = 0..steps-1, strictly decreasing.
std::vector<double> make_ladder(double delta0, std::size_t steps, int factor = 2);

/// Dyadic ladder 2^-lo ... 2^-hi.
std::vector<double> dyadic_ladder(int lo, int hi);

/// Occupied-cell counts per ladder scale. The finest scale is rasterized once
/// with lattice origin (0, 0) and coarser scales come from merging blocks, so
/// consecutive scales must differ by an integer factor (2 or 3). Counts are
/// returned in ladder order.
std::vector<std::size_t> box_count(const std::vector<Vec2>& points, const std::vector<double>& ladder);

/// Same, starting from an existing grid; every ladder scale must be an
/// integer multiple of grid.delta.
std::vector<std::size_t> box_count(const OccupancyGrid& grid, const std::vector<double>& ladder);

struct DimEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  /// max |log N - fit| / log 2 over the scales used.
  double residual = 0.0;
  /// Scales used in the fit, strictly decreasing.
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  /// Two coarsest scales dropped because the full fit was too curved.
  bool dropped_coarse = false;
};

/// Least-squares slope of log N against log(1/delta). Throws
/// Error(TooFewScales) below 4 scales.
DimEstimate fit_dimension(const std::vector<std::size_t>& counts, const std::vector<double>& scales);

/// Column width for the visible-part pipeline. The visible set over a column
/// axis has slope up to cot(beta), beta the angle between e and the nearest
/// cylinder orientation, so columns of width delta_min * sin(beta) / 2
/// resolve it at the finest ladder scale. Clamped to [delta_min/256,
/// delta_min/2]; beta = 0 gives the floor.
double visible_column_width(double delta_min, double beta);

struct VisibleDimension {
  double column_width = 0.0;
  std::size_t visible_points = 0;
  DimEstimate fit;
};

/// visible_sweep at visible_column_width, box counts over the ladder, fit.
VisibleDimension visible_dimension(const std::vector<Vec2>& points, Direction e, const std::vector<double>& ladder,
                                   double beta);

struct AssouadOptions {
  std::size_t n_balls = 64;
  /// (R, r) pairs; empty means R = diam/8 with R/r in {2^4, 2^6, 2^8}.
  std::vector<std::pair<double, double>> scale_pairs;
  /// Explicit centres; when empty they are sampled, one per occupied cell of
  /// a coarse grid (stratified), then thinned to n_balls with the seed.
  std::vector<Vec2> centers;
  std::uint64_t seed = 1;
};

struct AssouadEstimate {
  /// Heuristic lower estimate of the Assouad dimension.
  double value = 0.0;
  Vec2 center;
  double R = 0.0, r = 0.0;
  std::size_t count = 0;
};

/// max over centres x and pairs of log N(B(x, R), r) / log(R / r), where
/// N counts occupied r-cells among points within R of x.
AssouadEstimate assouad_estimate(const std::vector<Vec2>& points, const AssouadOptions& options = {});

}  // namespace affvis
