#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wfa/io.hpp"

namespace wfa {

// Knobs for the synthetic workforce scenario generator.  Worker decision
// weights are hierarchical (shared base + cluster offset + individual
// deviation), task features come from a Gaussian mixture, and task values mix
// cross-worker disagreement with noise.
struct ScenarioConfig {
  int n_workers = 20;
  int n_clusters = 3;
  int feature_dim = 16;
  int n_months = 22;
  int days_per_month = 20;
  double tasks_per_day_mean = 20.0;   // Poisson mean, clamped to >= 1 per day
  double capacity_weight_shape = 8.0; // Gamma shape of historical routing propensities
  double routing_affinity = 1.1;      // how strongly history routes tasks toward workers
                                      // inclined to accept them (0 = uniform routing)
  double sigma_base = 0.35;           // scale of the shared base weights
  double sigma_cluster = 0.8;         // scale of per-cluster weight offsets
  double sigma_indiv = 0.35;          // scale of per-worker weight deviations
  double accept_bias = 0.4;           // shared intercept (pushes base accept rate up)
  double sigma_bias = 0.15;           // per-worker intercept spread (risk tolerance)
  double value_alpha = 6.0;           // task value loading on cross-worker disagreement
  double value_noise = 0.5;           // stdev of task value noise
  int mixture_components = 5;
  double mixture_spread = 1.5;        // stdev of mixture component means
  double mixture_scale_min = 0.6;     // per-component axis scales drawn uniformly
  double mixture_scale_max = 1.4;
  uint64_t seed = 20240801;
};

ScenarioConfig scenario_config_from_json(const Json& j);
Json scenario_config_to_json(const ScenarioConfig& c);

// What the generator knows and the models must recover.
struct GroundTruth {
  std::vector<std::string> worker_ids;
  std::vector<std::vector<double>> weights;  // one weight vector per worker
  std::vector<double> biases;                // per-worker intercept
  std::vector<int> cluster;                  // worker -> cluster id
  double value_alpha = 0.0;
  double value_noise = 0.0;
};

Json ground_truth_to_json(const GroundTruth& t);
GroundTruth ground_truth_from_json(const Json& j);

struct GeneratedScenario {
  Scenario scenario;
  GroundTruth truth;
};

// Deterministic generation: the same config (including seed) produces the
// same scenario, record for record.  The last month of the horizon is the
// allocation window; roster capacities equal each worker's historical task
// counts there, so capacity exactly covers demand day by day.
GeneratedScenario generate_scenario(const ScenarioConfig& cfg);

// True acceptance probability sigmoid(w_i . features + b_i) for worker index
// i of the ground truth.
double true_accept_prob(const GroundTruth& t, int worker_index, const std::vector<double>& features);

// Population variance of the true acceptance probability across workers.
double disagreement(const GroundTruth& t, const std::vector<double>& features);

// Expected value of an allocation under the generator's true behaviour model:
// sum over assigned (worker, task) of sigmoid(w_i . phi_j + b_i) * v_j.
// `worker_ids` maps solution rows to ground-truth workers.
double realized_value(const AllocationSolution& s, const GroundTruth& t,
                      const std::vector<TaskInstance>& tasks,
                      const std::vector<std::string>& worker_ids);

}  // namespace wfa
