#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfa/domain.hpp"

namespace wfa {

// Ordered JSON keeps key order stable so emitted files are reproducible.
using Json = nlohmann::ordered_json;

struct ScenarioMeta {
  int feature_dim = 0;
  int days_per_month = 0;
  int n_months = 0;
  int opt_start_day = 0;  // first day of the allocation window (global index)
  uint64_t seed = 0;
};

// A scenario bundles the roster, every task over the horizon (the allocation
// window is the tail starting at meta.opt_start_day), and the full decision
// history.  Task days in `tasks` and `records` are global horizon indices;
// roster capacity is indexed by day local to the allocation window.
struct Scenario {
  ScenarioMeta meta;
  WorkerRoster roster;
  std::vector<TaskInstance> tasks;
  std::vector<DecisionRecord> records;
};

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// Sparse solution serialization: x as [i, j] pairs, y as [i, m] pairs,
// z as [i, j, m] triples, all in lexicographic order.
Json solution_to_json(const AllocationSolution& s);
AllocationSolution solution_from_json(const Json& j, int n_workers, int n_tasks, int max_models);

Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

}  // namespace wfa
