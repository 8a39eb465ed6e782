#include "affvis/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace affvis {

namespace {

constexpr const char* kModule = "dimension";

std::int64_t floor_div(std::int64_t a, std::int64_t f) { return a >= 0 ? a / f : -((-a + f - 1) / f); }

std::int64_t integer_ratio(double coarse, double fine) {
  const double q = coarse / fine;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * q) {
    throw Error(kModule, ErrorCode::InvalidArgument, "ladder scales must differ by integer factors");
  }
  return static_cast<std::int64_t>(r);
}

void check_ladder(const std::vector<double>& ladder) {
  if (ladder.empty()) throw Error(kModule, ErrorCode::InvalidArgument, "empty ladder");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "ladder scales must be positive");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) {
      throw Error(kModule, ErrorCode::InvalidArgument, "ladder must be strictly decreasing");
    }
  }
}

std::vector<std::size_t> count_from(std::vector<Cell> cells, const std::vector<double>& ladder, double base_delta) {
  std::vector<std::size_t> counts(ladder.size());
  double cur = base_delta;
  for (std::size_t k = ladder.size(); k-- > 0;) {
    const std::int64_t f = integer_ratio(ladder[k], cur);
    if (f > 1) {
      for (Cell& c : cells) c = {floor_div(c.i, f), floor_div(c.j, f)};
      std::sort(cells.begin(), cells.end());
      cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    }
    cur = ladder[k];
    counts[k] = cells.size();
  }
  return counts;
}

}  // namespace

std::vector<double> make_ladder(double delta0, std::size_t steps, int factor) {
  std::vector<double> out;
  double d = delta0;
  for (std::size_t k = 0; k < steps; ++k, d /= factor) out.push_back(d);
  return out;
}

std::vector<double> dyadic_ladder(int lo, int hi) {
  if (lo > hi) throw Error(kModule, ErrorCode::InvalidArgument, "ladder needs lo <= hi");
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<std::size_t> box_count(const std::vector<Vec2>& points, const std::vector<double>& ladder) {
  check_ladder(ladder);
  return count_from(rasterize_points(points, ladder.back()).cells, ladder, ladder.back());
}

std::vector<std::size_t> box_count(const OccupancyGrid& grid, const std::vector<double>& ladder) {
  check_ladder(ladder);
  return count_from(grid.cells, ladder, grid.delta);
}

DimEstimate fit_dimension(const std::vector<std::size_t>& counts, const std::vector<double>& scales) {
  if (counts.size() != scales.size()) {
    throw Error(kModule, ErrorCode::InvalidArgument, "counts and scales differ in length");
  }
  if (scales.size() < 4) throw Error(kModule, ErrorCode::TooFewScales, "need at least 4 scales");
  std::vector<std::size_t> order(scales.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scales[a] > scales[b]; });

  auto fit = [&](std::size_t first) {
    DimEstimate est;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = first; k < order.size(); ++k) {
      const std::size_t i = order[k];
      if (counts[i] == 0) throw Error(kModule, ErrorCode::InvalidArgument, "box counts must be positive");
      const double x = -std::log(scales[i]);
      const double y = std::log(static_cast<double>(counts[i]));
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      est.scales.push_back(scales[i]);
      est.counts.push_back(counts[i]);
    }
    const double n = static_cast<double>(est.scales.size());
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    est.intercept = (sy - est.slope * sx) / n;
    for (std::size_t k = 0; k < est.scales.size(); ++k) {
      const double fitted = est.intercept - est.slope * std::log(est.scales[k]);
      est.residual = std::max(est.residual, std::abs(std::log(static_cast<double>(est.counts[k])) - fitted));
    }
    est.residual /= std::log(2.0);
    return est;
  };

  DimEstimate est = fit(0);
  if (est.residual > 0.1 && scales.size() >= 6) {
    est = fit(2);
    est.dropped_coarse = true;
  }
  return est;
}

double visible_column_width(double delta_min, double beta) {
  if (!(delta_min > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "delta_min must be positive");
  return delta_min * std::clamp(0.5 * std::abs(std::sin(beta)), 1.0 / 256, 0.5);
}

VisibleDimension visible_dimension(const std::vector<Vec2>& points, Direction e, const std::vector<double>& ladder,
                                   double beta) {
  check_ladder(ladder);
  VisibleDimension out;
  out.column_width = visible_column_width(ladder.back(), beta);
  const std::vector<Vec2> vis = visible_sweep(points, e, out.column_width);
  out.visible_points = vis.size();
  out.fit = fit_dimension(box_count(vis, ladder), ladder);
  return out;
}

AssouadEstimate assouad_estimate(const std::vector<Vec2>& points, const AssouadOptions& options) {
  if (points.empty()) throw Error(kModule, ErrorCode::InvalidArgument, "empty point set");
  Vec2 lo = points.front(), hi = points.front();
  for (const Vec2& p : points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double diam = std::max(norm(hi - lo), 1e-300);

  auto pairs = options.scale_pairs;
  if (pairs.empty()) {
    const double R = diam / 8;
    for (int k : {4, 6, 8}) pairs.emplace_back(R, std::ldexp(R, -k));
  }
  for (const auto& [R, r] : pairs) {
    if (!(R > r && r > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "scale pairs need R > r > 0");
  }

  std::vector<Vec2> centers = options.centers;
  if (centers.empty()) {
    const OccupancyGrid coarse = rasterize_points(points, diam / 16, lo);
    std::unordered_map<std::int64_t, Vec2> rep;
    for (const Vec2& p : points) {
      const auto i = static_cast<std::int64_t>(std::floor((p.x - lo.x) / (diam / 16)));
      const auto j = static_cast<std::int64_t>(std::floor((p.y - lo.y) / (diam / 16)));
      rep.try_emplace(i * 1'000'003 + j, p);
    }
    for (const Cell& c : coarse.cells) centers.push_back(rep.at(c.i * 1'000'003 + c.j));
    if (centers.size() > options.n_balls) {
      std::mt19937_64 rng(options.seed);
      std::shuffle(centers.begin(), centers.end(), rng);
      centers.resize(options.n_balls);
    }
  }

  AssouadEstimate best;
  best.value = -1.0;
  for (const auto& [R, r] : pairs) {
    // Buckets of side R so a ball query touches 3x3 buckets.
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> buckets;
    auto key = [](std::int64_t i, std::int64_t j) { return i * 4'000'037 + j; };
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto i = static_cast<std::int64_t>(std::floor(points[k].x / R));
      const auto j = static_cast<std::int64_t>(std::floor(points[k].y / R));
      buckets[key(i, j)].push_back(static_cast<std::uint32_t>(k));
    }
    for (const Vec2& x : centers) {
      const auto ci = static_cast<std::int64_t>(std::floor(x.x / R));
      const auto cj = static_cast<std::int64_t>(std::floor(x.y / R));
      std::vector<Cell> cells;
      for (std::int64_t di = -1; di <= 1; ++di) {
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
          auto it = buckets.find(key(ci + di, cj + dj));
          if (it == buckets.end()) continue;
          for (std::uint32_t k : it->second) {
            const Vec2 p = points[k];
            if (norm(p - x) > R) continue;
            cells.push_back(
                {static_cast<std::int64_t>(std::floor(p.x / r)), static_cast<std::int64_t>(std::floor(p.y / r))});
          }
        }
      }
      std::sort(cells.begin(), cells.end());
      const auto n = static_cast<std::size_t>(std::unique(cells.begin(), cells.end()) - cells.begin());
      if (n == 0) continue;
      const double value = std::log(static_cast<double>(n)) / std::log(R / r);
      if (value > best.value) best = {value, x, R, r, n};
    }
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

}  // namespace affvis
