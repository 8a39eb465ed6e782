#include "affvis/symbolic.hpp"

#include <algorithm>
#include <atomic>
#include <queue>
#include <string>

#include "affvis/parallel.hpp"

namespace affvis {

namespace {

constexpr const char* kModule = "symbolic";

[[noreturn]] void throw_budget(std::size_t budget) {
  throw Error(kModule, ErrorCode::Budget,
              "cylinder antichain exceeds budget of " + std::to_string(budget) + " (resolution too fine?)");
}

}  // namespace

std::size_t common_prefix_length(const Word& a, const Word& b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

IFS::IFS(std::vector<AffineMap2> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) {
    throw Error(kModule, ErrorCode::InvalidArgument, "an IFS needs at least one map");
  }
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Mat2& a = maps_[i].linear;
    const double frob2 = a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 + a.a22 * a.a22;
    if (!a.is_finite() || !std::isfinite(maps_[i].translation.x) || !std::isfinite(maps_[i].translation.y)) {
      throw Error(kModule, ErrorCode::ParseError, "map " + std::to_string(i + 1) + " has non-finite entries");
    }
    if (!(std::abs(a.det()) > 1e-14 * frob2)) {
      throw Error(kModule, ErrorCode::Singular, "map " + std::to_string(i + 1) + " has a singular linear part");
    }
    if (singular_data(a).alpha1 >= 1.0) {
      throw Error(kModule, ErrorCode::NotContractive,
                  "map " + std::to_string(i + 1) + " is not a contraction (alpha1 >= 1)");
    }
  }
  base_point_ = maps_.front().fixed_point();
}

void validate_word(const IFS& ifs, const Word& w) {
  for (Symbol s : w) {
    if (s >= ifs.size()) {
      throw Error(kModule, ErrorCode::BadSymbol,
                  "symbol " + std::to_string(s) + " out of range for " + std::to_string(ifs.size()) + " maps");
    }
  }
}

Cylinder cylinder(const IFS& ifs, const Word& w) {
  validate_word(ifs, w);
  Cylinder c;
  c.word = w;
  for (Symbol s : w) {
    c.map = compose(c.map, ifs.map(s));
    c.det *= ifs.map(s).linear.det();
  }
  c.sdata = singular_data(c.map.linear, c.det);
  return c;
}

Cylinder extend(const IFS& ifs, const Cylinder& parent, Symbol s) {
  if (s >= ifs.size()) validate_word(ifs, Word{s});
  Cylinder c;
  c.word = parent.word;
  c.word.push_back(s);
  c.map = compose(parent.map, ifs.map(s));
  c.det = parent.det * ifs.map(s).linear.det();
  c.sdata = singular_data(c.map.linear, c.det);
  return c;
}

std::vector<Cylinder> refine_cylinders(const IFS& ifs, const CylinderPredicate& stop, std::size_t budget) {
  auto by_alpha1 = [](const Cylinder& a, const Cylinder& b) { return a.sdata.alpha1 < b.sdata.alpha1; };
  std::priority_queue<Cylinder, std::vector<Cylinder>, decltype(by_alpha1)> frontier(by_alpha1);
  std::vector<Cylinder> done;

  frontier.push(cylinder(ifs, Word{}));
  while (!frontier.empty()) {
    Cylinder c = frontier.top();
    frontier.pop();
    if (stop(c)) {
      done.push_back(std::move(c));
    } else {
      for (std::size_t s = 0; s < ifs.size(); ++s) frontier.push(extend(ifs, c, static_cast<Symbol>(s)));
    }
    if (done.size() + frontier.size() > budget) throw_budget(budget);
  }
  std::sort(done.begin(), done.end(), [](const Cylinder& a, const Cylinder& b) { return a.word < b.word; });
  return done;
}

Ball invariant_ball(const IFS& ifs) {
  Vec2 c{};
  for (const auto& m : ifs.maps()) c += m.fixed_point();
  c = c / static_cast<double>(ifs.size());
  double r = 0.0;
  for (const auto& m : ifs.maps()) {
    const double a1 = singular_data(m.linear).alpha1;
    r = std::max(r, norm(m(c) - c) / (1.0 - a1));
  }
  return {c, r};
}

namespace {

struct CloudNode {
  Mat2 linear;
  Vec2 translation;
};

// Sup over the enclosure of |A (v - p0)|: the distance from the anchor to the
// farthest point of the cylinder's image of the enclosure.
double anchor_radius(const Mat2& a, std::span<const Vec2> offsets) {
  double r2 = 0.0;
  for (const Vec2& d : offsets) {
    const Vec2 v = a * d;
    r2 = std::max(r2, dot(v, v));
  }
  return std::sqrt(r2);
}

}  // namespace

PointCloud attractor_cloud(const IFS& ifs, double delta, const CloudOptions& options) {
  if (!(delta > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "delta must be positive");

  const Vec2 p0 = ifs.base_point();
  std::vector<Vec2> enclosure = options.enclosure;
  if (enclosure.empty()) {
    const Ball b = invariant_ball(ifs);
    constexpr int kSides = 16;
    const double circ = b.radius / std::cos(kPi / kSides);
    for (int k = 0; k < kSides; ++k) enclosure.push_back(b.center + circ * unit_vector(2.0 * kPi * k / kSides));
  }
  std::vector<Vec2> offsets;
  offsets.reserve(enclosure.size());
  for (const Vec2& v : enclosure) offsets.push_back(v - p0);

  const std::size_t budget = options.budget;
  PointCloud cloud;
  cloud.resolution = delta;

  // Breadth-first until there are enough independent subtrees, keeping
  // lexicographic order; leaves met on the way become points directly.
  struct Item {
    CloudNode node;
    bool leaf;
  };
  std::vector<Item> level{{CloudNode{Mat2::identity(), Vec2{}}, false}};
  const std::size_t want_roots = 64 * static_cast<std::size_t>(thread_limit());
  auto is_leaf = [&](const CloudNode& n) { return anchor_radius(n.linear, offsets) <= delta; };
  level.front().leaf = is_leaf(level.front().node);
  for (int guard = 0; guard < 64; ++guard) {
    std::size_t open = 0;
    for (const Item& it : level) open += it.leaf ? 0 : 1;
    if (open == 0 || open >= want_roots) break;
    std::vector<Item> next;
    next.reserve(level.size() * ifs.size());
    for (const Item& it : level) {
      if (it.leaf) {
        next.push_back(it);
        continue;
      }
      for (const auto& m : ifs.maps()) {
        CloudNode child{it.node.linear * m.linear, it.node.linear * m.translation + it.node.translation};
        next.push_back({child, is_leaf(child)});
      }
    }
    if (next.size() > budget) throw_budget(budget);
    level = std::move(next);
  }

  std::vector<std::vector<Vec2>> parts(level.size());
  std::atomic<std::size_t> total{0};
  parallel_for(
      level.size(),
      [&](std::size_t r) {
        const Item& root = level[r];
        std::vector<Vec2>& out = parts[r];
        if (root.leaf) {
          out.push_back(root.node.linear * p0 + root.node.translation);
          ++total;
          return;
        }
        // Children pushed in reverse so the stack pops them in symbol order.
        std::vector<CloudNode> stack{root.node};
        std::size_t local = 0;
        while (!stack.empty()) {
          const CloudNode n = stack.back();
          stack.pop_back();
          if (is_leaf(n)) {
            out.push_back(n.linear * p0 + n.translation);
            if (++local == 4096) {
              if (total.fetch_add(local) + local > budget) throw_budget(budget);
              local = 0;
            }
            continue;
          }
          for (std::size_t s = ifs.size(); s-- > 0;) {
            const auto& m = ifs.map(s);
            stack.push_back({n.linear * m.linear, n.linear * m.translation + n.translation});
          }
        }
        if (total.fetch_add(local) + local > budget) throw_budget(budget);
      },
      1);

  std::size_t n = 0;
  for (const auto& p : parts) n += p.size();
  cloud.points.reserve(n);
  for (auto& p : parts) cloud.points.insert(cloud.points.end(), p.begin(), p.end());
  return cloud;
}

Word extend_word(const Word& prefix, std::size_t depth) {
  Word w = prefix;
  const Symbol fill = prefix.empty() ? Symbol{0} : prefix.back();
  if (w.size() < depth) w.resize(depth, fill);
  return w;
}

Vec2 symbolic_point(const IFS& ifs, const Word& prefix, std::size_t depth) {
  validate_word(ifs, prefix);
  if (depth < prefix.size()) {
    throw Error(kModule, ErrorCode::InvalidArgument, "depth shorter than prefix");
  }
  const Word w = extend_word(prefix, depth);
  AffineMap2 phi;
  for (Symbol s : w) phi = compose(phi, ifs.map(s));
  return phi(ifs.base_point());
}

}  // namespace affvis
