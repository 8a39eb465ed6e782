#pragma once

// The acceptance suite: eight end-to-end criteria with fixed seeds.

#include <cstdint>
#include <string>
#include <vector>

#include "affvis/report.hpp"

namespace affvis {

struct AcceptanceOptions {
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string threshold;
  /// Per-item data (directions, depths, samples) for the JSON report.
  Json detail = Json::object();
  double seconds = 0.0;
};

inline constexpr int kCriteria = 8;

/// Throws Error(InvalidArgument) for ids outside 1..8.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_criteria(const std::vector<int>& ids, const AcceptanceOptions& options = {});

/// Criteria exercised by a scenario; "all" gives 1..8.
std::vector<int> scenario_criteria(const std::string& name);

/// Report without timings, so identical inputs give identical bytes.
Json to_json(const CriterionResult& r);

/// The sixteen test directions: line angles spaced over the arc of P^1 at
/// least `clearance` from vertical, alternating between e and -e.
std::vector<Direction> off_vertical_directions(std::size_t n = 16, double clearance = 0.15);

}  // namespace affvis
