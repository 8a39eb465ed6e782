#include "affvis/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace affvis {

namespace {

constexpr const char* kModule = "scenarios";

AffineMap2 diag_map(double sx, double sy, double tx, double ty) { return {Mat2::diag(sx, sy), {tx, ty}}; }

}  // namespace

IFS carpet_ifs() {
  return IFS({diag_map(1.0 / 3, 0.5, 0.0, 0.0), diag_map(1.0 / 3, 0.5, 1.0 / 3, 0.5),
              diag_map(1.0 / 3, 0.5, 2.0 / 3, 0.0)});
}

// Positive matrices: both maps send the closed first quadrant deep inside
// itself, to disjoint arcs, and so do their transposes.
IFS positive_cone_ifs() {
  const Mat2 a1 = 0.125 * Mat2{4.0, 2.0, 1.0, 1.0};
  const Mat2 a2 = 0.125 * Mat2{1.0, 1.0, 2.0, 4.0};
  return IFS({{a1, {0.0, 0.0}}, {a2, {0.6, 0.3}}});
}

std::vector<std::string> scenario_names() { return {"carpet-5.1", "harmonic-5.2", "positive-cone"}; }

ScenarioSpec scenario(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  const double log3_2 = std::log(2.0) / std::log(3.0);
  if (name == "carpet-5.1") {
    s.description = "Bedford-McMullen carpet: three maps diag(1/3, 1/2) translated by (0,0), (1/3,1/2), (2/3,0)";
    s.ifs = carpet_ifs();
    s.expected = {
        {"dim_H E", std::log2(std::pow(2.0, log3_2) + 1.0), "closed-form", "log2(2^(log3 2) + 1)"},
        {"dim_A E", 1.0 + log3_2, "closed-form", "1 + log3 2"},
        {"dim_B E", 1.0 + std::log(1.5) / std::log(3.0), "closed-form", "1 + log3(3/2)"},
        {"dim vis^e E, e off vertical", 1.0, "closed-form", "1"},
        {"dim vis^(-pi/2) (C x [0,1])", log3_2, "closed-form", "log3 2"},
        {"tau", 1.5, "closed-form", "alpha1/alpha2 = (1/2)/(1/3)"},
        {"limit orientation", kPi / 2, "closed-form", "vertical"},
    };
    s.defaults = {{"--ladder", "6:12"}, {"--dir", "-0.7854"}, {"--eps", "1e-3"}, {"--depth", "6"}};
  } else if (name == "harmonic-5.2") {
    s.description = "K = A x A with A = {0} u {1/S_n}, S_n = 1 + 1/2 + ... + 1/n";
    s.expected = {
        {"dim_B A", 1.0, "closed-form", "lim log(N(delta_n)) / -log(delta_n)"},
        {"dim_B K", 2.0, "closed-form", "2 dim_B A"},
        {"dim_B vis^e K, almost every e", 2.0, "closed-form", "K countable"},
    };
    s.defaults = {{"--n", "100,1000,10000"}, {"--sample", "5000"}, {"--seed", "1"}};
  } else if (name == "positive-cone") {
    s.description = "two positive contractions [[4,2],[1,1]]/8 and [[1,1],[2,4]]/8 with strong cone separation";
    s.ifs = positive_cone_ifs();
    s.expected = {
        {"cone centre", kPi / 4, "numerical", "first quadrant"},
    };
    s.defaults = {{"--eps", "1e-2"}, {"--depth", "6"}, {"--samples", "10000"}};
  } else {
    throw Error(kModule, ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
  }
  return s;
}

IFS parse_ifs(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(kModule, ErrorCode::ParseError, e.what());
  }
  auto fail = [](const std::string& what) -> IFS { throw Error(kModule, ErrorCode::ParseError, what); };
  if (!doc.is_object() || !doc.contains("maps") || !doc["maps"].is_array()) return fail("expected {\"maps\": [...]}");
  std::vector<AffineMap2> maps;
  for (const auto& m : doc["maps"]) {
    if (!m.is_object() || !m.contains("a") || !m.contains("t")) return fail("each map needs \"a\" and \"t\"");
    const auto& a = m["a"];
    const auto& t = m["t"];
    auto num = [](const json& v) { return v.is_number(); };
    if (!a.is_array() || a.size() != 2 || !a[0].is_array() || !a[1].is_array() || a[0].size() != 2 ||
        a[1].size() != 2 || !num(a[0][0]) || !num(a[0][1]) || !num(a[1][0]) || !num(a[1][1])) {
      return fail("\"a\" must be a 2x2 array of numbers");
    }
    if (!t.is_array() || t.size() != 2 || !num(t[0]) || !num(t[1])) return fail("\"t\" must be two numbers");
    maps.push_back({{a[0][0].get<double>(), a[0][1].get<double>(), a[1][0].get<double>(), a[1][1].get<double>()},
                    {t[0].get<double>(), t[1].get<double>()}});
  }
  if (maps.empty()) return fail("no maps");
  return IFS(std::move(maps));
}

IFS load_ifs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(kModule, ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ifs(ss.str());
}

std::string ifs_to_json(const IFS& ifs) {
  nlohmann::ordered_json doc;
  doc["maps"] = nlohmann::ordered_json::array();
  for (const auto& m : ifs.maps()) {
    const Mat2& a = m.linear;
    doc["maps"].push_back({{"a", {{a.a11, a.a12}, {a.a21, a.a22}}}, {"t", {m.translation.x, m.translation.y}}});
  }
  return doc.dump(2) + "\n";
}

double harmonic_sum(std::size_t n) {
  double s = 0.0;
  for (std::size_t k = n; k >= 1; --k) s += 1.0 / static_cast<double>(k);
  return s;
}

double harmonic_delta(std::size_t n) {
  const double sn = harmonic_sum(n);
  const double sn1 = sn + 1.0 / static_cast<double>(n + 1);
  // 1/S_n - 1/S_{n+1} without cancellation.
  return (1.0 / static_cast<double>(n + 1)) / (sn * sn1);
}

std::vector<double> harmonic_set(std::size_t m) {
  std::vector<double> a;
  a.reserve(m + 1);
  double s = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    s += 1.0 / static_cast<double>(k);
    a.push_back(1.0 / s);
  }
  a.push_back(0.0);
  return a;
}

namespace {

// Isolated points 1/S_k (spacing to the next point >= delta) and the first
// point from which all spacings are below delta.
std::pair<std::vector<double>, double> harmonic_split(double delta) {
  if (!(delta > 0.0)) throw Error(kModule, ErrorCode::InvalidArgument, "delta must be positive");
  std::vector<double> isolated;
  double s = 1.0;
  for (std::size_t k = 1;; ++k) {
    const double next = s + 1.0 / static_cast<double>(k + 1);
    const double gap = (1.0 / static_cast<double>(k + 1)) / (s * next);
    if (gap < delta) return {isolated, 1.0 / s};
    isolated.push_back(1.0 / s);
    s = next;
  }
}

}  // namespace

std::size_t harmonic_cell_count(double delta) {
  const auto [isolated, tail] = harmonic_split(delta);
  const auto top = static_cast<std::int64_t>(std::floor(tail / delta));
  std::size_t count = static_cast<std::size_t>(top) + 1;
  std::int64_t last = top;
  // Isolated points are decreasing, so their cells are non-increasing.
  for (auto it = isolated.rbegin(); it != isolated.rend(); ++it) {
    const auto c = static_cast<std::int64_t>(std::floor(*it / delta));
    if (c > last) {
      ++count;
      last = c;
    }
  }
  return count;
}

std::vector<double> harmonic_resolved(double delta) {
  auto [pts, tail] = harmonic_split(delta);
  pts.push_back(tail);
  const double step = 0.5 * delta;
  const auto n = static_cast<std::size_t>(std::floor(tail / step));
  for (std::size_t i = 0; i <= n; ++i) pts.push_back(static_cast<double>(i) * step);
  return pts;
}

std::vector<Vec2> cantor_cross(int level) {
  if (level < 0 || level > 12) throw Error(kModule, ErrorCode::InvalidArgument, "level must be in 0..12");
  const double cell = std::pow(3.0, -level);
  std::vector<double> xs{0.0};
  for (int l = 0; l < level; ++l) {
    const double shift = 2.0 * std::pow(3.0, -(l + 1));
    std::vector<double> next;
    for (double x : xs) next.push_back(x);
    for (double x : xs) next.push_back(x + shift);
    xs = std::move(next);
  }
  const auto rows = static_cast<std::size_t>(std::llround(1.0 / cell));
  std::vector<Vec2> pts;
  pts.reserve(xs.size() * rows);
  for (double x : xs) {
    for (std::size_t j = 0; j < rows; ++j) pts.push_back({x + 0.5 * cell, (static_cast<double>(j) + 0.5) * cell});
  }
  return pts;
}

}  // namespace affvis
