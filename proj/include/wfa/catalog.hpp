#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wfa/domain.hpp"
#include "wfa/io.hpp"
#include "wfa/learners/forest.hpp"
#include "wfa/learners/logistic.hpp"
#include "wfa/learners/preprocess.hpp"

namespace wfa {

enum class ModelKind { Individual, Aggregate, Profile };

const char* to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

// Chronological data windows, all in whole months ending at the horizon's
// end: `train_months` of training data, then `test_months` held out for rate
// estimation, then `opt_months` of tasks to allocate.
struct SplitSpec {
  int train_months = 12;
  int test_months = 3;
  int opt_months = 1;
  int days_per_month = 20;
  int horizon_months = 0;    // total months available in the scenario
  int min_test_reviews = 50; // workers below this test-row floor are dropped

  int opt_start_day() const { return (horizon_months - opt_months) * days_per_month; }
  int opt_end_day() const { return horizon_months * days_per_month; }
  int test_start_day() const { return opt_start_day() - test_months * days_per_month; }
  int test_end_day() const { return opt_start_day(); }
  int train_start_day() const { return test_start_day() - train_months * days_per_month; }
  int train_end_day() const { return test_start_day(); }

  // Throws ValidationError when the windows are empty or do not fit the horizon.
  void validate() const;
};

// Split with the given training window, anchored to the scenario's horizon.
SplitSpec make_split(const ScenarioMeta& meta, int train_months, int min_test_reviews = 50);

// Hyperparameter search spaces and training knobs.
struct TrainingConfig {
  std::vector<double> lambda_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> leaf_grid = {5, 20, 50};
  int n_trees = 200;   // trees in the final aggregate forest
  int cv_trees = 60;   // smaller forests during leaf-size cross-validation
  int cv_folds = 10;
  int kmeans_restarts = 8;
  std::optional<int> profile_k; // override for the cluster-count rule
  uint64_t seed = 1;
};

TrainingConfig training_config_from_json(const Json& j);
Json training_config_to_json(const TrainingConfig& c);

// Behaviour-match rates of one candidate model for one worker, measured on
// that worker's held-out slice.
struct WorkerModelStats {
  ModelKind kind = ModelKind::Individual;
  double ppv_hat = 0.0;             // P(action = 1 | predicted 1), smoothed
  double for_hat = 0.0;             // P(action = 1 | predicted 0), smoothed
  std::optional<double> test_auc;   // unset when undefined (single-class slice)
  int test_rows = 0;
};

// Candidate models per worker plus the expectation tensor they induce over
// the allocation window's tasks.  `problem` is ready for the solvers: its
// roster holds only retained workers, its task days are local to the
// allocation window, and candidate order in selection mode is
// [individual, aggregate, profile].
struct ModelCatalog {
  std::string mode;  // uao-individual | uao-aggregate | uao-profile | dao
  SplitSpec split;
  AllocationProblem problem;
  std::vector<std::vector<WorkerModelStats>> candidates;  // [worker][m]
  std::vector<double> agg_raw;          // shared raw prediction per task; empty without that model
  std::vector<std::string> exclusions;  // human-readable drop log

  // Trained artifacts (filled only for the families the mode needs).  All
  // predictors consume standardized features via `scaler`.
  Standardizer scaler;
  std::vector<LinearModel> individual_models;       // per retained worker
  std::vector<double> individual_lambda;            // tuned penalty per worker
  ForestModel aggregate_model;                      // empty (no trees) when absent
  int aggregate_leaf = 0;                           // tuned min_samples_leaf
  std::vector<int> profile_assignment;              // retained worker -> cluster
  std::vector<std::array<double, 2>> profile_points; // per-worker (tpr, tnr) clustering inputs
  std::vector<LinearModel> profile_models;          // per cluster
  std::vector<double> profile_lambda;

  const std::vector<std::string>& worker_ids() const { return problem.roster.worker_ids; }
};

// Expected behaviour from a raw model probability and the model's estimated
// conditional rates:  ppv_hat * p_raw + for_hat * (1 - p_raw).
double adjusted_expectation(double p_raw, double ppv_hat, double for_hat);

// Smoothed (ppv, for) of thresholded probabilities against actual actions.
std::pair<double, double> estimate_conditional_rates(const std::vector<double>& probs,
                                                     const std::vector<int>& labels,
                                                     double threshold = 0.5, double alpha = 1.0);

// Cluster-count rule for profile models: 6 clusters from six training months
// up, 4 below, capped by the worker count; `override_k` wins when set.
int profile_cluster_count(int train_months, std::optional<int> override_k, int n_workers);

// Trains the model families the mode requires, estimates per-(worker, model)
// rates on the test window, and fills P[i][j][m] over the allocation window's
// tasks.  Workers with too few test reviews or no training rows are dropped
// (logged in `exclusions`) together with the window tasks historically routed
// to them, which keeps daily capacities sufficient.
ModelCatalog build_catalog(const Scenario& scenario, const SplitSpec& split,
                           const std::string& mode, const TrainingConfig& cfg);

// Full catalog export: split, exclusions, per-worker candidate stats, model
// metadata (tuned hyperparameters, cluster structure), and the allocation
// problem with the dense row-major expectation tensor.
Json catalog_to_json(const ModelCatalog& c);

// Restores the decision-relevant surface (mode, split, problem, stats,
// shared raw predictions, exclusions).  Trained parameters are metadata on
// export and are not reconstructed.
ModelCatalog catalog_from_json(const Json& j);

}  // namespace wfa
