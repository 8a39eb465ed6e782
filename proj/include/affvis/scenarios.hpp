#pragma once

// Built-in scenarios, IFS configuration files, and the point-set generators
// that are not self-affine (the harmonic product set, the Cantor cross).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "affvis/symbolic.hpp"

namespace affvis {

struct ExpectedValue {
  std::string quantity;
  double value = 0.0;
  /// "closed-form" for values taken from a formula, "numerical" for values
  /// computed here.
  std::string origin;
  std::string formula;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  /// Empty for scenarios given by a point-set generator.
  std::optional<IFS> ifs;
  std::vector<ExpectedValue> expected;
  /// Default parameters as (flag, value) text pairs.
  std::vector<std::pair<std::string, std::string>> defaults;
};

std::vector<std::string> scenario_names();

/// Throws Error(UnknownScenario).
ScenarioSpec scenario(const std::string& name);

IFS carpet_ifs();
IFS positive_cone_ifs();

/// {"maps":[{"a":[[a11,a12],[a21,a22]],"t":[tx,ty]}, ...]}. Throws
/// Error(ParseError), Error(Singular) or Error(NotContractive).
IFS parse_ifs(const std::string& json_text);
IFS load_ifs(const std::filesystem::path& path);
std::string ifs_to_json(const IFS& ifs);

/// S_n = 1 + 1/2 + ... + 1/n.
double harmonic_sum(std::size_t n);
/// delta_n = 1/S_n - 1/S_{n+1}.
double harmonic_delta(std::size_t n);

/// {0} and 1/S_k for k = 1..m, decreasing from 1 with 0 last.
std::vector<double> harmonic_set(std::size_t m);

/// Exact number of cells [k delta, (k+1) delta) meeting A = {0} u {1/S_n}.
/// Uses that consecutive points closer than delta fill every cell down to 0.
std::size_t harmonic_cell_count(double delta);

/// A delta-dense stand-in for A: the isolated points 1/S_k while their
/// spacing is at least delta, then a delta/2-spaced grid on [0, 1/S_k].
std::vector<double> harmonic_resolved(double delta);

/// Cantor cross C x [0, 1] at level `level`: centres of the 2^level Cantor
/// intervals times 3^level cell centres in [0, 1].
std::vector<Vec2> cantor_cross(int level);

}  // namespace affvis
