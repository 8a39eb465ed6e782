// affvis: command-line driver for attractors, regularity checks, visible
// parts and their dimensions.
//
// Exit codes: 0 success, 2 validation error, 3 budget exceeded, 4 an
// acceptance assertion failed.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affvis/acceptance.hpp"
#include "affvis/geometry.hpp"
#include "affvis/parallel.hpp"
#include "affvis/report.hpp"
#include "affvis/scenarios.hpp"
#include "affvis/tangent.hpp"

namespace fs = std::filesystem;
using namespace affvis;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;
constexpr int kExitAssertion = 4;

struct Args {
  std::string scenario = "carpet-5.1";
  std::string ifs_path;
  std::string out = "affvis-out";
  double delta = 1.0 / 256;
  std::string ladder = "6:12";
  double dir = -0.7854;
  std::size_t depth = 6;
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  unsigned threads = 0;
  double eps = 1e-3;
  bool all = false;
  std::size_t n = 0;
  double c = 1.0;
  std::string cycle;
  std::string what = "all";
  std::string name;
};

void apply_threads(const Args& a) {
  if (a.threads) set_thread_limit(a.threads);
}

std::size_t budget_of(const Args& a) { return a.budget ? a.budget : default_budget(); }

IFS load(const Args& a) {
  if (!a.ifs_path.empty()) return load_ifs(a.ifs_path);
  ScenarioSpec s = scenario(a.scenario);
  if (!s.ifs) throw Error("cli", ErrorCode::InvalidArgument, "scenario '" + a.scenario + "' has no IFS");
  return *s.ifs;
}

Json source(const Args& a) { return a.ifs_path.empty() ? Json(a.scenario) : Json(a.ifs_path); }

std::pair<int, int> parse_ladder(const std::string& s) {
  int lo = 0, hi = 0;
  char colon = 0;
  std::istringstream in(s);
  if (!(in >> lo >> colon >> hi) || colon != ':' || !in.eof() || lo < 0 || hi < lo + 3 || hi > 30) {
    throw Error("cli", ErrorCode::InvalidArgument, "--ladder expects LO:HI with 0 <= LO, HI >= LO + 3, HI <= 30");
  }
  return {lo, hi};
}

// 1-based comma list.
Word parse_word(const std::string& s, const IFS& ifs) {
  Word w;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    int v = 0;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error("cli", ErrorCode::InvalidArgument, "bad symbol '" + tok + "'");
    }
    if (v < 1 || static_cast<std::size_t>(v) > ifs.size()) {
      throw Error("cli", ErrorCode::InvalidArgument, "symbol " + tok + " out of range");
    }
    w.push_back(static_cast<Symbol>(v - 1));
  }
  return w;
}

void emit(const Args& a, const std::string& file, const std::string& content) {
  write_atomic(fs::path(a.out) / file, content);
}

void emit_report(const Args& a, const std::string& file, const Json& report) {
  emit(a, file, report.dump(2) + "\n");
}

std::optional<Cone> find_cone(const IFS& ifs, std::size_t depth) { return invariant_cone_search(ifs, depth); }

double cover_distance(const std::vector<AngularInterval>& cover, ProjLine l) {
  double best = kPi / 2;
  for (const auto& arc : cover) best = std::min(best, arc.distance(l));
  return best;
}

int cmd_gen(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  CloudOptions co;
  co.budget = budget_of(a);
  const PointCloud cloud = attractor_cloud(ifs, a.delta, co);
  const ConvexPolygon hull = attractor_hull(ifs, 1e-12, budget_of(a));
  CsvTable csv{{"x", "y"}, {}};
  for (const Vec2& p : cloud.points) csv.add({format_number(p.x), format_number(p.y)});
  emit(a, "cloud.csv", csv.str());
  emit(a, "attractor.svg", svg_cells(rasterize(cloud, a.delta)));
  Json rep = run_report("gen", {{"source", source(a)}, {"delta", a.delta}});
  Json verts = Json::array();
  for (const Vec2& v : hull.vertices) verts.push_back({v.x, v.y});
  rep["results"] = {{"points", cloud.points.size()}, {"resolution", cloud.resolution}, {"hull", verts}};
  emit_report(a, "gen.json", rep);
  std::printf("%zu points at resolution %s -> %s\n", cloud.points.size(), format_number(cloud.resolution).c_str(),
              a.out.c_str());
  return 0;
}

int cmd_check(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  const std::string what = a.all ? "all" : a.what;
  if (what != "all" && what != "domination" && what != "cone" && what != "projection") {
    throw Error("cli", ErrorCode::InvalidArgument, "check expects domination, cone, projection or all");
  }
  Json rep = run_report("check " + what, {{"source", source(a)}, {"depth", a.depth}, {"dir", a.dir}, {"seed", a.seed}});
  if (what == "all" || what == "domination") {
    DominationOptions o;
    o.seed = a.seed;
    const DominationReport d = domination_report(ifs, a.depth, o);
    rep["results"]["domination"] = {{"verdict", d.verdict}, {"tau_fit", d.tau_fit}, {"tau_min", d.tau_min},
                                    {"level_min", d.level_min}, {"verified_depth", d.verified_depth}};
    std::printf("domination %s (tau %.6g)\n", d.verdict ? "PASS" : "FAIL", d.tau_fit);
  }
  if (what == "all" || what == "cone") {
    const auto cone = find_cone(ifs, a.depth);
    Json j = {{"found", cone.has_value()}};
    if (cone) {
      const SeparationResult s = strong_cone_separation_check(ifs, *cone);
      j["cone"] = to_json(cone->arc());
      j["strong_separation"] = s.passed;
      j["witness"] = s.witness;
      std::printf("cone [%.6f, %.6f], strong separation %s%s%s\n", cone->arc().lo, cone->arc().hi(),
                  s.passed ? "PASS" : "FAIL", s.witness.empty() ? "" : ": ", s.witness.c_str());
    } else {
      std::printf("cone not found\n");
    }
    rep["results"]["cone"] = j;
  }
  if (what == "all" || what == "projection") {
    ProjectionOptions o;
    o.budget = budget_of(a);
    const ProjectionResult p = projection_condition_check(ifs, Direction(a.dir), a.depth, o);
    rep["results"]["projection"] = {{"verdict", p.passed},         {"worst_gap", p.worst_gap},
                                    {"gap_tol", p.gap_tol},        {"worst_word", to_json(p.worst_word)},
                                    {"directions", p.directions}};
    std::printf("projection %s (worst gap %.3g, tolerance %.3g)\n", p.passed ? "PASS" : "FAIL", p.worst_gap,
                p.gap_tol);
  }
  emit_report(a, "check.json", rep);
  return 0;
}

int cmd_orient(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  const auto cone = find_cone(ifs, a.depth);
  if (!cone)
    throw Error("regularity", ErrorCode::NoCone, "no invariant cone found at depth " + std::to_string(a.depth));
  const auto cover = orientation_cover(ifs, a.eps, *cone, budget_of(a));
  CsvTable csv{{"lo", "hi", "width"}, {}};
  Json arcs = Json::array();
  for (const auto& arc : cover) {
    csv.add({format_number(arc.lo), format_number(arc.hi()), format_number(arc.width)});
    arcs.push_back(to_json(arc));
    std::printf("[%.9f, %.9f]\n", arc.lo, arc.hi());
  }
  Json rep = run_report("orient", {{"source", source(a)}, {"eps", a.eps}, {"depth", a.depth}});
  rep["results"] = {{"cone", to_json(cone->arc())}, {"intervals", arcs}};
  emit(a, "orient.csv", csv.str());
  emit_report(a, "orient.json", rep);
  return 0;
}

int cmd_vis(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  CloudOptions co;
  co.budget = budget_of(a);
  const PointCloud cloud = attractor_cloud(ifs, a.delta, co);
  const OccupancyGrid grid = rasterize(cloud, a.delta);
  const OccupancyGrid vis = visible_sweep(grid, Direction(a.dir));
  CsvTable csv{{"i", "j", "x", "y"}, {}};
  for (const Cell& c : vis.cells) {
    const Vec2 p = vis.center(c);
    csv.add({std::to_string(c.i), std::to_string(c.j), format_number(p.x), format_number(p.y)});
  }
  emit(a, "visible.csv", csv.str());
  emit(a, "visible.svg", svg_cells(grid, &vis));
  Json rep = run_report("vis", {{"source", source(a)}, {"delta", a.delta}, {"dir", a.dir}});
  rep["results"] = {{"attractor_cells", grid.cells.size()}, {"visible_cells", vis.cells.size()}};
  emit_report(a, "vis.json", rep);
  std::printf("%zu of %zu cells visible\n", vis.cells.size(), grid.cells.size());
  return 0;
}

int cmd_vis_dim(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  const auto [lo, hi] = parse_ladder(a.ladder);
  const auto ladder = dyadic_ladder(lo, hi);
  CloudOptions co;
  co.budget = budget_of(a);
  const PointCloud cloud = attractor_cloud(ifs, std::ldexp(1.0, -(hi + 2)), co);
  const Direction e(a.dir);
  std::vector<AngularInterval> cover;
  if (const auto cone = find_cone(ifs, a.depth)) cover = orientation_cover(ifs, a.eps, *cone, budget_of(a));
  const double beta = cover_distance(cover, e.carrier());
  const VisibleDimension vd = visible_dimension(cloud.points, e, ladder, beta);
  const DimEstimate full = fit_dimension(box_count(cloud.points, ladder), ladder);

  CsvTable csv{{"delta", "attractor", "visible"}, {}};
  const auto vcounts = vd.fit.dropped_coarse ? box_count(visible_sweep(cloud.points, e, vd.column_width), ladder)
                                             : vd.fit.counts;
  const auto acounts = box_count(cloud.points, ladder);
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    csv.add({format_number(ladder[k]), std::to_string(acounts[k]), std::to_string(vcounts[k])});
  }
  emit(a, "counts.csv", csv.str());
  emit(a, "loglog.svg", svg_loglog({{"E", full}, {"visible", vd.fit}}));
  Json rep = run_report("vis-dim", {{"source", source(a)}, {"ladder", a.ladder}, {"dir", a.dir}, {"eps", a.eps}});
  rep["results"] = {{"cloud_resolution", cloud.resolution}, {"beta", beta},
                    {"column_width", vd.column_width},      {"visible_points", vd.visible_points},
                    {"visible", to_json(vd.fit)},           {"attractor", to_json(full)}};
  emit_report(a, "vis-dim.json", rep);
  std::printf("visible slope %.4f (residual %.3f), attractor slope %.4f, ladder 2^-%d..2^-%d\n", vd.fit.slope,
              vd.fit.residual, full.slope, lo, hi);
  return 0;
}

int cmd_scan(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  ProjectionOptions o;
  o.budget = budget_of(a);
  o.cover_eps = a.eps;
  const std::size_t n = a.n ? a.n : 32;
  const auto rows = direction_scan(ifs, n, a.depth, o);
  CsvTable csv{{"index", "angle", "exceptional", "passed", "worst_gap"}, {}};
  std::size_t pass = 0, exc = 0;
  for (const ScanRow& r : rows) {
    csv.add({std::to_string(r.index), format_number(r.direction.angle()), r.exceptional ? "1" : "0",
             r.passed ? "1" : "0", format_number(r.worst_gap)});
    pass += r.passed ? 1 : 0;
    exc += r.exceptional ? 1 : 0;
  }
  emit(a, "scan.csv", csv.str());
  Json rep = run_report("scan", {{"source", source(a)}, {"n", n}, {"depth", a.depth}, {"eps", a.eps}});
  rep["results"] = {{"directions", rows.size()}, {"passed", pass}, {"exceptional", exc}};
  emit_report(a, "scan.json", rep);
  std::printf("%zu directions: %zu pass, %zu exceptional\n", rows.size(), pass, exc);
  return 0;
}

int cmd_tangent(const Args& a) {
  apply_threads(a);
  const IFS ifs = load(a);
  SymbolStream stream;
  if (a.cycle.empty()) {
    for (std::size_t k = 0; k < ifs.size(); ++k) stream.cycle.push_back(static_cast<Symbol>(k));
  } else {
    stream.cycle = parse_word(a.cycle, ifs);
  }
  const std::size_t n_max = a.n ? a.n : 12;
  const auto steps = tangent_sequence(ifs, stream, n_max, a.c);
  CsvTable csv{{"n", "r", "h", "v", "orientation"}, {}};
  std::vector<ApproxRect> long_rects;
  for (const auto& s : steps) {
    csv.add({std::to_string(s.n), format_number(s.frame.r), format_number(s.rect.h), format_number(s.rect.v),
             format_number(s.rect.orientation.angle())});
    if (s.rect.h > 2.0) long_rects.push_back(s.rect);
  }
  emit(a, "tangent.csv", csv.str());
  Json lines = Json::array();
  for (const HalfLine& h : kakeya_extract(long_rects).lines) {
    lines.push_back({{"base", {h.base.x, h.base.y}}, {"direction", h.direction.angle()}});
  }
  Json rep = run_report("tangent", {{"source", source(a)}, {"n", n_max}, {"c", a.c}, {"cycle", to_json(stream.cycle)}});
  rep["results"] = {{"steps", steps.size()}, {"kakeya", lines}};
  emit_report(a, "tangent.json", rep);
  std::printf("%zu steps, %zu Kakeya carriers\n", steps.size(), lines.size());
  return 0;
}

int cmd_scenario_list() {
  for (const std::string& name : scenario_names()) {
    const ScenarioSpec s = scenario(name);
    std::printf("%s: %s\n", name.c_str(), s.description.c_str());
    for (const auto& e : s.expected) {
      std::printf("  %-32s %.6f  (%s: %s)\n", e.quantity.c_str(), e.value, e.origin.c_str(), e.formula.c_str());
    }
  }
  return 0;
}

int cmd_scenario_run(const Args& a) {
  apply_threads(a);
  const std::string name = a.all ? "all" : (a.name.empty() ? a.scenario : a.name);
  const auto ids = scenario_criteria(name);
  AcceptanceOptions o;
  o.seed = a.seed;
  Json rep = run_report("scenario run " + name, {{"seed", a.seed}});
  rep["results"]["criteria"] = Json::array();
  bool ok = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, o);
    std::printf("criterion %d %s: %s | %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.measured.c_str());
    std::fflush(stdout);
    rep["results"]["criteria"].push_back(to_json(r));
    add_assertion(rep, "criterion " + std::to_string(id), r.passed, r.measured, r.threshold);
    ok = ok && r.passed;
  }
  emit_report(a, "scenario-" + name + ".json", rep);
  return ok ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affvis: planar self-affine sets, their visible parts and dimensions"};
  app.require_subcommand(1);
  app.fallthrough();
  Args a;
  app.add_option("--scenario", a.scenario, "built-in scenario")->capture_default_str();
  app.add_option("--ifs", a.ifs_path, "IFS JSON file (overrides --scenario)");
  app.add_option("--out", a.out, "output directory")->capture_default_str();
  app.add_option("--delta", a.delta, "resolution")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--ladder", a.ladder, "dyadic exponents LO:HI")->capture_default_str();
  app.add_option("--dir", a.dir, "direction angle in radians")->capture_default_str();
  app.add_option("--depth", a.depth, "word length / search depth")->check(CLI::Range(1, 40))->capture_default_str();
  app.add_option("--seed", a.seed, "random seed")->capture_default_str();
  app.add_option("--budget", a.budget, "cell/point budget (default AFFINE_VIS_BUDGET or 5e7)");
  app.add_option("--threads", a.threads, "worker thread cap (0 = all cores)");
  app.add_option("--eps", a.eps, "orientation cover resolution")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--all", a.all, "run everything the command offers");
  app.add_option("--n", a.n, "number of directions (scan) or steps (tangent)");
  app.add_option("--c", a.c, "tangent scale constant")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--cycle", a.cycle, "tangent symbol cycle, 1-based, comma separated");

  int code = 0;
  auto* gen = app.add_subcommand("gen", "attractor cloud, hull and picture");
  gen->callback([&] { code = cmd_gen(a); });
  auto* check = app.add_subcommand("check", "domination, invariant cone / strong separation, projection condition");
  check->add_option("what", a.what, "domination | cone | projection | all");
  check->callback([&] { code = cmd_check(a); });
  app.add_subcommand("orient", "cover of the limit orientation set")->callback([&] { code = cmd_orient(a); });
  app.add_subcommand("vis", "visible cells at one resolution")->callback([&] { code = cmd_vis(a); });
  app.add_subcommand("vis-dim", "box dimension of the visible part")->callback([&] { code = cmd_vis_dim(a); });
  app.add_subcommand("scan", "projection condition over a direction grid")->callback([&] { code = cmd_scan(a); });
  app.add_subcommand("tangent", "approximating rectangles and Kakeya carriers")->callback([&] {
    code = cmd_tangent(a);
  });
  auto* sc = app.add_subcommand("scenario", "built-in scenarios");
  sc->require_subcommand(1);
  sc->add_subcommand("list", "names and expected values")->callback([&] { code = cmd_scenario_list(); });
  auto* run = sc->add_subcommand("run", "acceptance criteria for a scenario (or all)");
  run->add_option("name", a.name, "scenario name or 'all'");
  run->callback([&] { code = cmd_scenario_run(a); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  } catch (const Error& e) {
    std::fprintf(stderr, "error %s\n", e.what());
    return e.code() == ErrorCode::Budget ? kExitBudget : kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return code;
}
