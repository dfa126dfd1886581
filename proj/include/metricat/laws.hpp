#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/json_io.hpp"

namespace metricat {

struct LawConfig {
  std::uint64_t seed = 7;
  std::size_t instances = 400;
  std::size_t max_points = 4;          // K, L, M and the injectivity subjects
  std::vector<ExtRat> grid = {};       // distances; empty means default_grid()
  std::vector<ExtRat> eps_values = {}; // empty means {0, 1/2, 1, 3/2, 2, inf}
  std::vector<ExtRat> ap_grid = {};    // descending grid for the approximate laws; empty means {1, 1/2, 1/4}
  std::size_t family_cap = 2;          // test family: all grid spaces up to this size
  Budget budget;
  Exec exec = Exec::Parallel;
};

struct LawOutcome {
  std::string id;
  std::string statement;
  std::uint64_t checked = 0;       // instances evaluated
  std::uint64_t premise_held = 0;  // instances where the hypothesis was true
  std::uint64_t failures = 0;
  std::optional<Json> counterexample;  // first failure in instance order
};

struct LawReport {
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::vector<LawOutcome> laws;
  /// Properties that are not theorems; recorded so their counterexamples stay visible.
  std::vector<LawOutcome> observations;

  bool pass() const;
};

/// Generates the seeded corpus and checks every law on every instance.
/// Instances run in parallel under Exec::Parallel; tallies are merged in
/// instance order, so the report does not depend on the schedule.
LawReport law_harness(const LawConfig& config);

Json to_json(const LawReport& report);

}  // namespace metricat
