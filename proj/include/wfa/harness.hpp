#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfa/allocator.hpp"
#include "wfa/catalog.hpp"
#include "wfa/synthgen.hpp"

namespace wfa {

// Methods the pipeline knows how to run.  "dpo" thresholds the shared
// model's raw predictions at 0.5 (point predictions, no uncertainty);
// "uao-*" fix one model family for everyone; "dao-*" select per worker.
extern const std::vector<std::string> kAllMethods;

struct RunOptions {
  std::vector<std::string> methods = kAllMethods;
  int train_months = 12;
  int min_test_reviews = 50;
  long baseline_samples = 10000;
  long node_limit = 200000;
  int heuristic_restarts = 8;
  uint64_t seed = 1;  // drives training, the baseline sampler, and the heuristic
};

struct MethodResult {
  std::string method;
  double objective = 0.0;
  SolverStatus status = SolverStatus::ExactOptimal;
  double pct_improvement = 0.0;       // vs the random baseline mean
  std::optional<double> realized;     // true expected value (synthetic runs)
  std::optional<double> auc;          // row-weighted test AUC of the models used
  std::optional<double> bound_gap;    // dao-exact
  std::optional<long> nodes;          // dao-exact
  std::map<std::string, int> selection_counts;  // dao methods: workers per kind
  double wall_ms = 0.0;               // solver wall time (excluded from JSON reports)
};

struct FamilyAuc {
  std::string family;
  std::optional<double> weighted_auc;  // weights = per-worker test rows
  int workers_scored = 0;              // workers whose AUC was defined
  long test_rows = 0;
};

struct ExperimentReport {
  int train_months = 0;
  uint64_t seed = 0;
  int n_workers = 0;
  int n_tasks = 0;
  RandomPolicyStats baseline;
  std::string baseline_universe;  // candidate set the baseline randomizes over
  std::vector<MethodResult> methods;
  std::vector<FamilyAuc> auc_table;
  Json allocation_statistics;     // filled when a dao method ran; {} otherwise
  std::vector<std::string> exclusions;
};

// Workers per selected model kind (from the one-hot y rows); counts sum to
// the worker count.
std::map<std::string, int> model_selection_profile(const AllocationSolution& s,
                                                   const ModelCatalog& catalog);

// Assigned tasks partitioned by the selected model kind of their worker:
// per kind, the task count, the median standard-scaled task value, and the
// median shared-model raw prediction.  Kinds with no tasks are omitted.
Json allocation_statistics(const AllocationSolution& s, const ModelCatalog& catalog);

// Trains what the requested methods need, solves each method, and compares
// everything against one random-policy baseline.  `truth` (optional) adds
// realized values.  Deterministic for fixed inputs; wall times are the only
// non-reproducible fields and stay out of the JSON report.
ExperimentReport run_pipeline(const Scenario& scenario, const GroundTruth* truth,
                              const RunOptions& run, const TrainingConfig& training);

Json report_to_json(const ExperimentReport& r);

struct SweepOptions {
  std::vector<int> windows = {3, 6, 9, 12, 15, 18};
  int n_seeds = 20;
  uint64_t master_seed = 7;
  RunOptions run;  // per-cell options; seed is derived per (seed index, window)
};

// One (window, seed, method) outcome.
struct SweepCell {
  int window = 0;
  int seed_index = 0;
  std::string method;
  double objective = 0.0;
  std::optional<double> realized;
  double pct_improvement = 0.0;
  std::optional<double> auc;
  double wall_ms = 0.0;
  std::optional<double> individual_share;  // dao methods: selection share
  Json allocation_statistics;              // dao-exact rows
};

struct SweepSummaryRow {
  int window = 0;
  std::string method;
  int n_seeds = 0;
  double median_objective = 0.0;
  double median_pct_improvement = 0.0;
  std::optional<double> median_auc;
  std::optional<double> median_realized;
  std::optional<double> median_individual_share;
};

struct SweepResult {
  std::vector<int> windows;
  int n_seeds = 0;
  std::vector<SweepCell> cells;          // ordered by (seed, window, method)
  std::vector<SweepSummaryRow> summary;  // ordered by (window, method)
};

// Regenerates the scenario per seed index and runs the pipeline per window.
// The base config's horizon must cover the largest window plus the test and
// allocation months.
SweepResult sweep_training_window(const ScenarioConfig& base, const TrainingConfig& training,
                                  const SweepOptions& sweep);

// Fixed-column CSV: method,window,seed,objective,realized,pct_improvement,auc,wall_ms
// (one row per cell; optional fields render as empty cells).
std::string sweep_to_csv(const SweepResult& r);
std::string report_to_csv(const ExperimentReport& r);

// Medians table as JSON (deterministic; no wall times).
Json sweep_summary_json(const SweepResult& r);

}  // namespace wfa
