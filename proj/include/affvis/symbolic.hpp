#pragma once

// Iterated function systems, words over their alphabet, cylinders, and
// finite-resolution approximations of the attractor.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "affvis/error.hpp"
#include "affvis/linalg2.hpp"

namespace affvis {

/// Map index, 0-based (the text-facing "map 1" is symbol 0).
using Symbol = std::uint16_t;
using Word = std::vector<Symbol>;

/// Length of the longest common prefix; the symbolic metric is 2^-lcp.
std::size_t common_prefix_length(const Word& a, const Word& b);

/// An ordered, validated list of contractive invertible affine maps.
class IFS {
 public:
  /// Throws Error(Singular) for a non-invertible linear part and
  /// Error(NotContractive) when alpha1 >= 1.
  explicit IFS(std::vector<AffineMap2> maps);

  std::size_t size() const { return maps_.size(); }
  const AffineMap2& map(std::size_t i) const { return maps_[i]; }
  const std::vector<AffineMap2>& maps() const { return maps_; }

  /// Fixed point of map 0; every anchor point is an image of it.
  Vec2 base_point() const { return base_point_; }

 private:
  std::vector<AffineMap2> maps_;
  Vec2 base_point_;
};

struct Cylinder {
  Word word;
  AffineMap2 map;
  double det = 1.0;  // product of factor determinants
  SingularData sdata;
};

/// phi_w = phi_{w1} o ... o phi_{wn} with its singular data.
/// Throws Error(BadSymbol) for an out-of-range symbol.
Cylinder cylinder(const IFS& ifs, const Word& w);

/// Child of a cylinder: word w.s, map phi_w o phi_s.
Cylinder extend(const IFS& ifs, const Cylinder& parent, Symbol s);

using CylinderPredicate = std::function<bool(const Cylinder&)>;

/// Minimal covering antichain: every returned cylinder satisfies `stop`, none
/// of its proper prefixes does, and the words are sorted lexicographically.
/// Throws Error(Budget) once the frontier would exceed `budget` entries.
std::vector<Cylinder> refine_cylinders(const IFS& ifs, const CylinderPredicate& stop,
                                       std::size_t budget = default_budget());

/// A point set with the Hausdorff resolution it was built for.
struct PointCloud {
  std::vector<Vec2> points;
  double resolution = 0.0;
};

/// Centre/radius of a ball B with phi_i(B) inside B for every map, hence E in B.
struct Ball {
  Vec2 center;
  double radius = 0.0;
};
Ball invariant_ball(const IFS& ifs);

struct CloudOptions {
  std::size_t budget = default_budget();
  /// Vertices of a convex set containing the attractor. Tighter enclosures
  /// give fewer points for the same guarantee. Empty: use invariant_ball.
  std::vector<Vec2> enclosure;
};

/// delta-net of the attractor: one anchor phi_w(p0) per word w of the
/// antichain where every point of phi_w(enclosure) is within delta of the
/// anchor. p0 is the fixed point of map 0. Points are ordered by word.
PointCloud attractor_cloud(const IFS& ifs, double delta, const CloudOptions& options = {});

/// The word `prefix` continued by repeating its last symbol (symbol 0 if the
/// prefix is empty) up to length `depth`.
Word extend_word(const Word& prefix, std::size_t depth);

/// phi_w(p0) with w = extend_word(prefix, depth). Within alpha1(w)·diam(E) of
/// the canonical projection of the infinite continuation.
Vec2 symbolic_point(const IFS& ifs, const Word& prefix, std::size_t depth);

/// Throws Error(BadSymbol) if any symbol of w is out of range.
void validate_word(const IFS& ifs, const Word& w);

}  // namespace affvis
