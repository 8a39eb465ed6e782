#pragma once

// Domination diagnostics, invariant cones in P^1, certified covers of the
// limit-orientation set, and the bounded-distortion / porosity checks that
// go with strong cone separation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affvis/symbolic.hpp"

namespace affvis {

/// Closed arc [lo, lo + width] of P^1 (angles mod pi), lo in [0, pi),
/// 0 <= width < pi.
struct AngularInterval {
  double lo = 0.0;
  double width = 0.0;

  double hi() const { return lo + width; }
  double mid() const { return lo + 0.5 * width; }
  /// Is l within the arc, allowing `slack` radians outside its ends?
  bool contains(ProjLine l, double slack = 0.0) const;
  /// P^1 distance from l to the arc (0 inside).
  double distance(ProjLine l) const;
};

/// Image m(I) as an arc (the arc through m(mid), not its complement).
AngularInterval image_interval(const Mat2& m, const AngularInterval& arc);

/// inner lies inside outer with at least `margin` to spare at both ends.
bool strictly_inside(const AngularInterval& inner, const AngularInterval& outer, double margin);

/// Arcs are disjoint with a gap larger than `margin`.
bool disjoint(const AngularInterval& a, const AngularInterval& b, double margin);

/// Union of arcs as a sorted list of disjoint arcs. Arcs closer than `join`
/// are merged.
std::vector<AngularInterval> merge_intervals(std::vector<AngularInterval> arcs, double join = 0.0);

/// Minimal arc containing all given lines. Empty input or a set with no gap
/// wider than `min_gap` has no proper hull.
std::optional<AngularInterval> angular_hull(const std::vector<ProjLine>& lines, double min_gap = 1e-12);

/// A proper cone: the arc [center - half_width, center + half_width].
struct Cone {
  ProjLine center;
  double half_width = kPi / 4;

  AngularInterval arc() const { return {ProjLine(center.angle() - half_width).angle(), 2.0 * half_width}; }
  static Cone from_arc(const AngularInterval& a) { return {ProjLine(a.mid()), 0.5 * a.width}; }
};

/// Endpoint tolerance used for "strictly inside".
inline constexpr double kConeMargin = 1e-9;

struct DominationOptions {
  double tau_min = 1.01;
  /// Levels with kappa^n above this are sampled instead of enumerated.
  std::size_t exhaustive_limit = 1'000'000;
  std::size_t samples_per_level = 20'000;
  std::uint64_t seed = 1;
};

struct DominationReport {
  /// level_min[n-1] = min over words of length n of (alpha1/alpha2)^(1/n).
  std::vector<double> level_min;
  std::vector<bool> level_exhaustive;
  /// exp of the least-squares slope of log(min ratio) against n.
  double tau_fit = 1.0;
  double tau_min = 1.01;
  /// True when every tested level clears tau_min ("verified to depth").
  bool verdict = false;
  /// First level from which every tested level clears tau_min.
  std::optional<std::size_t> n0;
  std::size_t verified_depth = 0;
};

DominationReport domination_report(const IFS& ifs, std::size_t n_max, const DominationOptions& options = {});

/// Looks for a cone X with A_i(X) and A_i^T(X) inside int(X) for every map,
/// seeded from the angular hull of theta1 over words of length `depth`.
/// nullopt means no certificate at this depth, not a disproof.
std::optional<Cone> invariant_cone_search(const IFS& ifs, std::size_t depth);

/// Checks X for invariance under every A_i and A_i^T (strictly inside).
bool cone_is_invariant(const IFS& ifs, const Cone& x);

enum class SeparationFailure { None, NotInvariant, TransposeNotInvariant, Overlap };

struct SeparationResult {
  bool passed = false;
  SeparationFailure failure = SeparationFailure::None;
  /// Offending map indices (0-based); j is unused for invariance failures.
  std::size_t i = 0, j = 0;
  std::string witness;
  std::vector<AngularInterval> images;
};

/// Strong cone separation: invariance of X under A_i and A_i^T plus pairwise
/// disjoint images A_i(X). Throws Error(ImproperCone) unless
/// 0 < half_width < pi/2.
SeparationResult strong_cone_separation_check(const IFS& ifs, const Cone& x);

/// Union of the arcs A_w(X), refined until every arc is at most eps wide.
/// Covers the limit-orientation set. Throws Error(NoCone) if X is not
/// invariant and Error(Budget) on blow-up.
std::vector<AngularInterval> orientation_cover(const IFS& ifs, double eps, const Cone& x,
                                               std::size_t budget = default_budget());

/// Constants of the tangent bi-Lipschitz estimate on the cone.
struct DistortionConstants {
  /// Minimum P^1 distance from <eta2(w)> to X over the sampled words.
  double delta_sep = 0.0;
  /// max((pi - delta)/delta, 1/sin^2(delta/2)).
  double M = 1.0;
};

DistortionConstants distortion_constants(const IFS& ifs, const Cone& x, std::size_t depth = 8);

struct LimitOrientation {
  ProjLine line;
  /// M * pi * alpha2/alpha1 of the truncated word.
  double error_bound = 0.0;
};

/// theta1 of extend_word(prefix, n) with a certified distance bound to the
/// limit orientation of the infinite continuation.
LimitOrientation limit_orientation(const IFS& ifs, const Word& prefix, std::size_t n,
                                   const DistortionConstants& constants);

struct DistortionReport {
  DistortionConstants constants;
  /// Smallest depth at which every image A_w(X) is at most delta_sep wide.
  std::optional<std::size_t> k0;
  std::size_t word_length = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Largest relative excursion beyond either bound (0 when none).
  double max_violation = 0.0;
  /// Observed extremes of angle(A a, A b) / (angle(a, b) * alpha2/alpha1).
  double min_normalized = 0.0;
  double max_normalized = 0.0;
};

/// Samples words of the given length and line pairs in X and checks
/// M^-1 (alpha2/alpha1) angle(a,b) <= angle(A a, A b) <= M^2 (alpha2/alpha1) angle(a,b).
DistortionReport distortion_check(const IFS& ifs, const Cone& x, std::size_t samples, std::size_t word_length,
                                  std::uint64_t seed = 1);

struct PorosityReport {
  /// Per level k = 1..depth: min over parents of (widest gap among children)
  /// / (hull of children).
  std::vector<double> level_min_gap;
  double min_gap = 0.0;
  double max_gap = 0.0;
  /// Widest gap |I| between neighbouring level-1 images.
  double first_level_gap = 0.0;
  /// Width |Y| of the hull of level-1 images.
  double first_level_span = 0.0;
  /// D^-1 |I| / |Y| with D = M^3.
  double lower_bound = 0.0;
  double M3 = 1.0;
  /// max/min of level_min_gap.
  double spread = 1.0;
};

/// Relative gap sizes of the Moran construction A_w(X). Throws Error(NoGap)
/// when level-1 images touch or overlap.
PorosityReport porosity_gap(const IFS& ifs, const Cone& x, std::size_t depth);

}  // namespace affvis
