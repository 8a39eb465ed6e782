#include "affvis/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <tuple>

namespace affvis {

namespace {

constexpr const char* kModule = "regularity";

// Enumerates all words of one length when there are at most `limit` of them,
// otherwise `samples` uniform random words. fn(word, matrix, det).
template <class Fn>
bool for_words(const IFS& ifs, std::size_t length, std::size_t limit, std::size_t samples, std::mt19937_64& rng,
               Fn&& fn) {
  const std::size_t k = ifs.size();
  double count = std::pow(static_cast<double>(k), static_cast<double>(length));
  if (count <= static_cast<double>(limit)) {
    Word w(length);
    std::vector<Mat2> mats(length + 1, Mat2::identity());
    std::vector<double> dets(length + 1, 1.0);
    // Odometer over words with prefix products cached per position.
    std::size_t pos = 0;
    std::vector<std::size_t> digit(length, 0);
    while (true) {
      for (; pos < length; ++pos) {
        w[pos] = static_cast<Symbol>(digit[pos]);
        mats[pos + 1] = mats[pos] * ifs.map(digit[pos]).linear;
        dets[pos + 1] = dets[pos] * ifs.map(digit[pos]).linear.det();
      }
      fn(w, mats[length], dets[length]);
      std::size_t p = length;
      while (p > 0 && digit[p - 1] + 1 == k) {
        digit[p - 1] = 0;
        --p;
      }
      if (p == 0) break;
      ++digit[p - 1];
      pos = p - 1;
    }
    return true;
  }
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  Word w(length);
  for (std::size_t n = 0; n < samples; ++n) {
    Mat2 m = Mat2::identity();
    double det = 1.0;
    for (std::size_t p = 0; p < length; ++p) {
      const std::size_t s = pick(rng);
      w[p] = static_cast<Symbol>(s);
      m = m * ifs.map(s).linear;
      det *= ifs.map(s).linear.det();
    }
    fn(w, m, det);
  }
  return false;
}

bool nearly_isotropic(const SingularData& sd) { return sd.alpha2 >= sd.alpha1 * (1.0 - 1e-9); }

double gap_between(const AngularInterval& first, const AngularInterval& second) {
  return wrap_angle(second.lo - first.hi(), kPi);
}

}  // namespace

bool AngularInterval::contains(ProjLine l, double slack) const {
  const double d = wrap_angle(l.angle() - lo, kPi);
  return d <= width + slack || d >= kPi - slack;
}

double AngularInterval::distance(ProjLine l) const {
  const double d = wrap_angle(l.angle() - lo, kPi);
  if (d <= width) return 0.0;
  return std::min(d - width, kPi - d);
}

AngularInterval image_interval(const Mat2& m, const AngularInterval& arc) {
  const Vec2 ulo = m * unit_vector(arc.lo);
  const Vec2 uhi = m * unit_vector(arc.hi());
  const ProjLine p = ProjLine::from_vector(ulo);
  const ProjLine q = ProjLine::from_vector(uhi);
  const ProjLine c = proj_apply(m, ProjLine(arc.mid()));
  const double w = wrap_angle(q.angle() - p.angle(), kPi);
  const double small = line_angle(ulo, uhi);
  if (wrap_angle(c.angle() - p.angle(), kPi) <= w) {
    return {p.angle(), w < 0.5 * kPi ? small : w};
  }
  const double wc = kPi - w;
  return {q.angle(), wc < 0.5 * kPi ? small : wc};
}

bool strictly_inside(const AngularInterval& inner, const AngularInterval& outer, double margin) {
  const double d = wrap_angle(inner.lo - outer.lo, kPi);
  return d >= margin && d + inner.width <= outer.width - margin;
}

bool disjoint(const AngularInterval& a, const AngularInterval& b, double margin) {
  const double d = wrap_angle(b.lo - a.lo, kPi);
  return d - a.width > margin && kPi - d - b.width > margin;
}

std::vector<AngularInterval> merge_intervals(std::vector<AngularInterval> arcs, double join) {
  if (arcs.empty()) return arcs;
  for (auto& a : arcs) a.lo = wrap_angle(a.lo, kPi);
  std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::vector<AngularInterval> out;
  for (const auto& a : arcs) {
    if (!out.empty() && a.lo <= out.back().hi() + join) {
      out.back().width = std::max(out.back().width, a.hi() - out.back().lo);
    } else {
      out.push_back(a);
    }
  }
  // The last arc may run past pi and swallow arcs at the start.
  while (out.size() > 1 && out.back().hi() - kPi + join >= out.front().lo) {
    auto& last = out.back();
    last.width = std::max(last.width, out.front().hi() + kPi - last.lo);
    out.erase(out.begin());
  }
  if (out.size() == 1 && out.front().width >= kPi) out.front() = {0.0, kPi};
  return out;
}

std::optional<AngularInterval> angular_hull(const std::vector<ProjLine>& lines, double min_gap) {
  if (lines.empty()) return std::nullopt;
  std::vector<double> a;
  a.reserve(lines.size());
  for (auto l : lines) a.push_back(l.angle());
  std::sort(a.begin(), a.end());
  double best = a.front() + kPi - a.back();
  std::size_t start = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] - a[i - 1] > best) {
      best = a[i] - a[i - 1];
      start = i;
    }
  }
  if (best <= min_gap) return std::nullopt;
  return AngularInterval{a[start], kPi - best};
}

DominationReport domination_report(const IFS& ifs, std::size_t n_max, const DominationOptions& options) {
  if (n_max < 1) throw Error(kModule, ErrorCode::InvalidArgument, "n_max must be at least 1");
  if (!(options.tau_min > 1.0)) throw Error(kModule, ErrorCode::InvalidArgument, "tau_min must exceed 1");
  DominationReport rep;
  rep.tau_min = options.tau_min;
  std::mt19937_64 rng(options.seed);
  for (std::size_t n = 1; n <= n_max; ++n) {
    double lo = std::numeric_limits<double>::infinity();
    const bool exhaustive = for_words(ifs, n, options.exhaustive_limit, options.samples_per_level, rng,
                                      [&](const Word&, const Mat2& m, double det) {
                                        const SingularData sd = singular_data(m, det);
                                        lo = std::min(lo, std::log(sd.alpha1 / sd.alpha2));
                                      });
    rep.level_min.push_back(std::exp(lo / static_cast<double>(n)));
    rep.level_exhaustive.push_back(exhaustive);
  }

  // Least-squares slope of n log(m_n) = log min(alpha1/alpha2) against n.
  const std::size_t levels = rep.level_min.size();
  if (levels == 1) {
    rep.tau_fit = rep.level_min.front();
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < levels; ++i) {
      const double x = static_cast<double>(i + 1);
      const double y = x * std::log(rep.level_min[i]);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double nl = static_cast<double>(levels);
    rep.tau_fit = std::exp((nl * sxy - sx * sy) / (nl * sxx - sx * sx));
  }

  // Small relative slack so exact ratios like 3/2 are not lost to rounding.
  auto ok = [&](double m) { return m >= rep.tau_min * (1.0 - 1e-12); };
  rep.verdict = std::all_of(rep.level_min.begin(), rep.level_min.end(), ok);
  while (rep.verified_depth < levels && ok(rep.level_min[rep.verified_depth])) ++rep.verified_depth;
  if (ok(rep.level_min.back())) {
    std::size_t n0 = levels;
    while (n0 > 1 && ok(rep.level_min[n0 - 2])) --n0;
    rep.n0 = n0;
  }
  return rep;
}

bool cone_is_invariant(const IFS& ifs, const Cone& x) {
  const AngularInterval arc = x.arc();
  for (const auto& m : ifs.maps()) {
    if (!strictly_inside(image_interval(m.linear, arc), arc, kConeMargin)) return false;
    if (!strictly_inside(image_interval(m.linear.transpose(), arc), arc, kConeMargin)) return false;
  }
  return true;
}

std::optional<Cone> invariant_cone_search(const IFS& ifs, std::size_t depth) {
  if (depth < 1) throw Error(kModule, ErrorCode::InvalidArgument, "depth must be at least 1");
  std::vector<ProjLine> thetas;
  std::mt19937_64 rng(depth);
  for_words(ifs, depth, 100'000, 20'000, rng, [&](const Word&, const Mat2& m, double det) {
    thetas.push_back(singular_data(m, det).theta1);
  });
  const auto hull = angular_hull(thetas);
  if (!hull) return std::nullopt;
  const double half = 0.55 * hull->width;
  for (double extra : {0.0, kPi / 64, kPi / 32, kPi / 16, kPi / 8, kPi / 4}) {
    const double hw = half + extra;
    if (hw <= 0.0) continue;
    if (hw >= 0.5 * kPi - 1e-9) break;
    const Cone c{ProjLine(hull->mid()), hw};
    if (cone_is_invariant(ifs, c)) return c;
  }
  return std::nullopt;
}

SeparationResult strong_cone_separation_check(const IFS& ifs, const Cone& x) {
  if (!(x.half_width > 0.0 && x.half_width < 0.5 * kPi)) {
    throw Error(kModule, ErrorCode::ImproperCone, "cone half-width must lie in (0, pi/2)");
  }
  SeparationResult res;
  const AngularInterval arc = x.arc();
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const AngularInterval img = image_interval(ifs.map(i).linear, arc);
    res.images.push_back(img);
    if (!strictly_inside(img, arc, kConeMargin)) {
      res.failure = SeparationFailure::NotInvariant;
      res.i = i;
      res.witness = "A_" + std::to_string(i + 1) + "(X) is not inside int(X)";
      return res;
    }
    if (!strictly_inside(image_interval(ifs.map(i).linear.transpose(), arc), arc, kConeMargin)) {
      res.failure = SeparationFailure::TransposeNotInvariant;
      res.i = i;
      res.witness = "A_" + std::to_string(i + 1) + "^T(X) is not inside int(X)";
      return res;
    }
  }
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    for (std::size_t j = i + 1; j < ifs.size(); ++j) {
      if (!disjoint(res.images[i], res.images[j], kConeMargin)) {
        res.failure = SeparationFailure::Overlap;
        res.i = i;
        res.j = j;
        res.witness = "A_" + std::to_string(i + 1) + "(X) and A_" + std::to_string(j + 1) + "(X) overlap or touch";
        return res;
      }
    }
  }
  res.passed = true;
  return res;
}

std::vector<AngularInterval> orientation_cover(const IFS& ifs, double eps, const Cone& x, std::size_t budget) {
  if (!(eps > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "eps must be positive");
  if (!cone_is_invariant(ifs, x)) {
    throw Error(kModule, ErrorCode::NoCone, "cone is not invariant under the maps and their transposes");
  }
  const AngularInterval root = x.arc();
  if (root.width <= eps) return {root};

  // Words whose matrices agree up to scale give the same subtree; keep one.
  auto key = [](const Mat2& m) {
    const double s = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
    auto q = [s](double v) { return std::llround(v / s * 1e12); };
    return std::make_tuple(q(m.a11), q(m.a12), q(m.a21), q(m.a22));
  };

  std::vector<AngularInterval> done;
  std::vector<Mat2> level{Mat2::identity()};
  while (!level.empty()) {
    std::map<std::tuple<long long, long long, long long, long long>, Mat2> next;
    for (const Mat2& parent : level) {
      for (const auto& f : ifs.maps()) {
        const Mat2 m = parent * f.linear;
        // Keep products O(1) in size; only the projective action matters.
        const double s = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
        const Mat2 mn = (1.0 / s) * m;
        const AngularInterval img = image_interval(mn, root);
        if (img.width <= eps) {
          done.push_back(img);
        } else {
          next.emplace(key(mn), mn);
        }
      }
    }
    if (done.size() + next.size() > budget) {
      throw Error(kModule, ErrorCode::Budget, "orientation cover exceeds budget of " + std::to_string(budget));
    }
    level.clear();
    for (auto& [k, m] : next) level.push_back(m);
  }
  return merge_intervals(std::move(done));
}

namespace {

double constant_m(double delta) {
  if (!(delta > 0.0)) return std::numeric_limits<double>::infinity();
  const double s = std::sin(0.5 * delta);
  return std::max({(kPi - delta) / delta, 1.0 / (s * s), 1.0});
}

}  // namespace

DistortionConstants distortion_constants(const IFS& ifs, const Cone& x, std::size_t depth) {
  const AngularInterval arc = x.arc();
  double sep = kPi / 2;
  std::mt19937_64 rng(depth + 17);
  for (std::size_t n = 1; n <= std::max<std::size_t>(depth, 1); ++n) {
    for_words(ifs, n, 100'000, 10'000, rng, [&](const Word&, const Mat2& m, double det) {
      const SingularData sd = singular_data(m, det);
      if (nearly_isotropic(sd)) return;
      sep = std::min(sep, arc.distance(ProjLine::from_vector(sd.eta2)));
    });
  }
  return {sep, constant_m(sep)};
}

LimitOrientation limit_orientation(const IFS& ifs, const Word& prefix, std::size_t n,
                                   const DistortionConstants& constants) {
  if (n < prefix.size()) throw Error(kModule, ErrorCode::InvalidArgument, "n shorter than prefix");
  const Cylinder c = cylinder(ifs, extend_word(prefix, n));
  return {c.sdata.theta1, constants.M * kPi * c.sdata.alpha2 / c.sdata.alpha1};
}

DistortionReport distortion_check(const IFS& ifs, const Cone& x, std::size_t samples, std::size_t word_length,
                                  std::uint64_t seed) {
  if (word_length < 1) throw Error(kModule, ErrorCode::InvalidArgument, "word length must be at least 1");
  DistortionReport rep;
  rep.word_length = word_length;
  rep.constants = distortion_constants(ifs, x, word_length);
  const AngularInterval arc = x.arc();
  std::mt19937_64 rng(seed);

  // k0: first depth where every image of X is within delta_sep.
  for (std::size_t k = 1; k <= 64; ++k) {
    bool small = true;
    for_words(ifs, k, 100'000, 10'000, rng, [&](const Word&, const Mat2& m, double) {
      if (image_interval(m, arc).width > rep.constants.delta_sep) small = false;
    });
    if (small) {
      rep.k0 = k;
      break;
    }
  }

  const double M = rep.constants.M;
  std::uniform_int_distribution<std::size_t> pick(0, ifs.size() - 1);
  std::uniform_real_distribution<double> in_arc(0.0, arc.width);
  rep.min_normalized = std::numeric_limits<double>::infinity();
  rep.max_normalized = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    Word w(word_length);
    for (auto& s : w) s = static_cast<Symbol>(pick(rng));
    const Cylinder c = cylinder(ifs, w);
    const Vec2 a = unit_vector(arc.lo + in_arc(rng));
    const Vec2 b = unit_vector(arc.lo + in_arc(rng));
    const double ang = line_angle(a, b);
    ++rep.samples;
    if (ang == 0.0) continue;
    const double img = line_angle(c.map.linear * a, c.map.linear * b);
    const double r = c.sdata.alpha2 / c.sdata.alpha1;
    const double normalized = img / (r * ang);
    rep.min_normalized = std::min(rep.min_normalized, normalized);
    rep.max_normalized = std::max(rep.max_normalized, normalized);
    const double excess = std::max(1.0 / M - normalized, normalized - M * M) / (1.0 / M);
    if (excess > 1e-9) {
      ++rep.violations;
      rep.max_violation = std::max(rep.max_violation, excess);
    }
  }
  if (rep.min_normalized == std::numeric_limits<double>::infinity()) rep.min_normalized = 0.0;
  return rep;
}

PorosityReport porosity_gap(const IFS& ifs, const Cone& x, std::size_t depth) {
  if (depth < 1) throw Error(kModule, ErrorCode::InvalidArgument, "depth must be at least 1");
  if (ifs.size() < 2) throw Error(kModule, ErrorCode::NoGap, "a single map has a single image interval");
  const AngularInterval root = x.arc();

  // Children arcs ordered along the parent; returns (widest gap, hull width).
  auto children_gap = [&](const Mat2& parent) {
    const AngularInterval pa = image_interval(parent, root);
    std::vector<AngularInterval> kids;
    for (const auto& f : ifs.maps()) kids.push_back(image_interval(parent * f.linear, root));
    std::sort(kids.begin(), kids.end(), [&](const auto& a, const auto& b) {
      return wrap_angle(a.lo - pa.lo + 1e-3 * pa.width, kPi) < wrap_angle(b.lo - pa.lo + 1e-3 * pa.width, kPi);
    });
    double widest = 0.0;
    for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
      const double g = gap_between(kids[i], kids[i + 1]);
      if (g > 0.5 * kPi || g <= kConeMargin * pa.width) return std::make_pair(0.0, 1.0);
      widest = std::max(widest, g);
    }
    const double span = wrap_angle(kids.back().hi() - kids.front().lo, kPi);
    return std::make_pair(widest, span);
  };

  PorosityReport rep;
  const auto [g1, span1] = children_gap(Mat2::identity());
  if (!(g1 > 0.0)) throw Error(kModule, ErrorCode::NoGap, "first-level image intervals touch or overlap");
  rep.first_level_gap = g1;
  rep.first_level_span = span1;
  const DistortionConstants dc = distortion_constants(ifs, x, std::min<std::size_t>(depth + 2, 10));
  rep.M3 = dc.M * dc.M * dc.M;
  rep.lower_bound = g1 / span1 / rep.M3;

  std::mt19937_64 rng(depth);
  for (std::size_t k = 1; k <= depth; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    for_words(ifs, k - 1, 100'000, 10'000, rng, [&](const Word&, const Mat2& m, double) {
      const double s = std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
      const auto [g, span] = children_gap((1.0 / s) * m);
      lo = std::min(lo, g / span);
    });
    rep.level_min_gap.push_back(lo);
  }
  rep.min_gap = *std::min_element(rep.level_min_gap.begin(), rep.level_min_gap.end());
  rep.max_gap = *std::max_element(rep.level_min_gap.begin(), rep.level_min_gap.end());
  rep.spread = rep.min_gap > 0.0 ? rep.max_gap / rep.min_gap : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace affvis
