#include "wfa/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wfa/learners/crossval.hpp"
#include "wfa/learners/kmeans.hpp"
#include "wfa/learners/metrics.hpp"
#include "wfa/util.hpp"

namespace wfa {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Individual: return "individual";
    case ModelKind::Aggregate: return "aggregate";
    case ModelKind::Profile: return "profile";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "individual") return ModelKind::Individual;
  if (s == "aggregate") return ModelKind::Aggregate;
  if (s == "profile") return ModelKind::Profile;
  throw ValidationError("unknown model kind: " + s);
}

void SplitSpec::validate() const {
  if (days_per_month < 1) throw ValidationError("split: days_per_month must be >= 1");
  if (train_months < 1 || test_months < 1 || opt_months < 1)
    throw ValidationError("split: every window needs at least one month");
  if (horizon_months < train_months + test_months + opt_months) {
    std::ostringstream os;
    os << "split: horizon of " << horizon_months << " months cannot hold " << train_months
       << " train + " << test_months << " test + " << opt_months << " allocation months";
    throw ValidationError(os.str());
  }
  if (min_test_reviews < 0) throw ValidationError("split: min_test_reviews must be >= 0");
}

SplitSpec make_split(const ScenarioMeta& meta, int train_months, int min_test_reviews) {
  SplitSpec s;
  s.train_months = train_months;
  s.days_per_month = meta.days_per_month;
  s.horizon_months = meta.n_months;
  s.min_test_reviews = min_test_reviews;
  s.validate();
  // The scenario's own allocation window must be the split's: both are the
  // final month(s) of the horizon.
  if (meta.opt_start_day != s.opt_start_day())
    throw ValidationError("split: scenario allocation window does not end the horizon");
  return s;
}

TrainingConfig training_config_from_json(const Json& j) {
  TrainingConfig c;
  try {
    if (j.contains("lambda_grid")) c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("leaf_grid")) c.leaf_grid = j.at("leaf_grid").get<std::vector<int>>();
    if (j.contains("n_trees")) c.n_trees = j.at("n_trees").get<int>();
    if (j.contains("cv_trees")) c.cv_trees = j.at("cv_trees").get<int>();
    if (j.contains("cv_folds")) c.cv_folds = j.at("cv_folds").get<int>();
    if (j.contains("kmeans_restarts")) c.kmeans_restarts = j.at("kmeans_restarts").get<int>();
    if (j.contains("profile_k") && !j.at("profile_k").is_null())
      c.profile_k = j.at("profile_k").get<int>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("training config: ") + e.what());
  }
  if (c.lambda_grid.empty() || c.leaf_grid.empty())
    throw ValidationError("training config: hyperparameter grids must be non-empty");
  if (c.n_trees < 1 || c.cv_trees < 1 || c.cv_folds < 2 || c.kmeans_restarts < 1)
    throw ValidationError("training config: counts out of range");
  return c;
}

Json training_config_to_json(const TrainingConfig& c) {
  Json j;
  j["lambda_grid"] = c.lambda_grid;
  j["leaf_grid"] = c.leaf_grid;
  j["n_trees"] = c.n_trees;
  j["cv_trees"] = c.cv_trees;
  j["cv_folds"] = c.cv_folds;
  j["kmeans_restarts"] = c.kmeans_restarts;
  if (c.profile_k) j["profile_k"] = *c.profile_k;
  return j;
}

double adjusted_expectation(double p_raw, double ppv_hat, double for_hat) {
  if (!(p_raw >= 0.0 && p_raw <= 1.0))
    throw std::invalid_argument("adjusted_expectation: p_raw outside [0,1]");
  if (!(ppv_hat >= 0.0 && ppv_hat <= 1.0) || !(for_hat >= 0.0 && for_hat <= 1.0))
    throw std::invalid_argument("adjusted_expectation: rates outside [0,1]");
  return ppv_hat * p_raw + for_hat * (1.0 - p_raw);
}

std::pair<double, double> estimate_conditional_rates(const std::vector<double>& probs,
                                                     const std::vector<int>& labels,
                                                     double threshold, double alpha) {
  if (probs.size() != labels.size() || probs.empty())
    throw std::invalid_argument("estimate_conditional_rates: bad input sizes");
  std::vector<int> predicted(probs.size());
  for (size_t r = 0; r < probs.size(); ++r) predicted[r] = probs[r] >= threshold ? 1 : 0;
  ClassifierMetrics m = confusion_rates(predicted, labels, alpha);
  return {m.ppv, m.for_rate};
}

int profile_cluster_count(int train_months, std::optional<int> override_k, int n_workers) {
  int k = override_k ? *override_k : (train_months >= 6 ? 6 : 4);
  k = std::min(k, n_workers);
  if (k < 1) throw ValidationError("profile clustering needs at least one worker");
  return k;
}

namespace {

struct WorkerData {
  std::string id;
  int roster_row = -1;
  std::vector<std::vector<double>> train_x;  // standardized lazily (raw here)
  std::vector<int> train_y;
  std::vector<std::vector<double>> test_x;
  std::vector<int> test_y;
};

// Tunes lambda by stratified CV when there is enough data; with fewer than
// two rows the strongest regularization in the grid is used unchecked.
LinearModel fit_logistic_cv(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                            const TrainingConfig& cfg, int max_folds, uint64_t seed,
                            double* chosen_lambda) {
  double lambda = *std::max_element(cfg.lambda_grid.begin(), cfg.lambda_grid.end());
  int folds = std::min<int>({max_folds, cfg.cv_folds, static_cast<int>(x.size())});
  if (folds >= 2 && cfg.lambda_grid.size() > 1) {
    auto fit = [](const std::vector<std::vector<double>>& xtr, const std::vector<int>& ytr,
                  double lam) { return train_logistic(xtr, ytr, lam); };
    auto score = [](const LinearModel& m, const std::vector<double>& row) {
      return predict_proba(m, row);
    };
    lambda = cross_validate(x, y, cfg.lambda_grid, folds, seed, CvMetric::Auc, fit, score)
                 .best_param;
  } else if (cfg.lambda_grid.size() == 1) {
    lambda = cfg.lambda_grid[0];
  }
  if (chosen_lambda) *chosen_lambda = lambda;
  return train_logistic(x, y, lambda);
}

// Forest leaf sizes are clamped so that `rows >= 2 * min_samples_leaf` always
// holds for whatever subset the fold hands us.
int clamp_leaf(int leaf, size_t rows) {
  return std::max(1, std::min<int>(leaf, static_cast<int>(rows / 2)));
}

ForestModel fit_forest_cv(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                          const TrainingConfig& cfg, uint64_t seed, int* chosen_leaf) {
  if (x.size() < 2) throw ValidationError("aggregate model needs at least two pooled rows");
  int leaf = clamp_leaf(*std::max_element(cfg.leaf_grid.begin(), cfg.leaf_grid.end()), x.size());
  int folds = std::min<int>({cfg.cv_folds, static_cast<int>(x.size())});
  if (folds >= 2 && cfg.leaf_grid.size() > 1) {
    std::vector<double> grid(cfg.leaf_grid.begin(), cfg.leaf_grid.end());
    auto fit = [&](const std::vector<std::vector<double>>& xtr, const std::vector<int>& ytr,
                   double param) {
      return train_forest(xtr, ytr, clamp_leaf(static_cast<int>(param), xtr.size()), cfg.cv_trees,
                          mix_seed(seed, "cv-forest"));
    };
    auto score = [](const ForestModel& m, const std::vector<double>& row) {
      return predict_proba(m, row);
    };
    double best = cross_validate(x, y, grid, folds, seed, CvMetric::Auc, fit, score).best_param;
    leaf = clamp_leaf(static_cast<int>(best), x.size());
  } else if (cfg.leaf_grid.size() == 1) {
    leaf = clamp_leaf(cfg.leaf_grid[0], x.size());
  }
  if (chosen_leaf) *chosen_leaf = leaf;
  return train_forest(x, y, leaf, cfg.n_trees, seed);
}

WorkerModelStats rate_stats(ModelKind kind, const std::vector<double>& test_probs,
                            const std::vector<int>& test_y) {
  WorkerModelStats st;
  st.kind = kind;
  st.test_rows = static_cast<int>(test_y.size());
  auto rates = estimate_conditional_rates(test_probs, test_y);
  st.ppv_hat = rates.first;
  st.for_hat = rates.second;
  try {
    st.test_auc = roc_auc(test_y, test_probs);
  } catch (const UndefinedMetricError&) {
    // single-class test slice: AUC stays unset
  }
  return st;
}

}  // namespace

ModelCatalog build_catalog(const Scenario& scenario, const SplitSpec& split,
                           const std::string& mode, const TrainingConfig& cfg) {
  split.validate();
  if (scenario.meta.days_per_month != split.days_per_month ||
      scenario.meta.n_months != split.horizon_months)
    throw ValidationError("catalog: split does not match the scenario horizon");
  const bool is_dao = mode == "dao";
  const bool need_individual = is_dao || mode == "uao-individual";
  const bool need_profile = is_dao || mode == "uao-profile";
  const bool need_aggregate = is_dao || mode == "uao-aggregate" || need_profile;
  if (!need_individual && !need_aggregate)
    throw ValidationError("catalog: unknown mode " + mode);

  ModelCatalog cat;
  cat.mode = mode;
  cat.split = split;

  // Partition the decision history into per-worker train and test slices.
  std::map<std::string, WorkerData> by_worker;
  for (int i = 0; i < scenario.roster.n_workers(); ++i) {
    WorkerData wd;
    wd.id = scenario.roster.worker_ids[i];
    wd.roster_row = i;
    by_worker.emplace(wd.id, std::move(wd));
  }
  for (const auto& rec : scenario.records) {
    auto it = by_worker.find(rec.worker_id);
    if (it == by_worker.end()) continue;  // history for someone not on the roster
    const int day = rec.task.day;
    if (day >= split.train_start_day() && day < split.train_end_day()) {
      it->second.train_x.push_back(rec.task.features);
      it->second.train_y.push_back(rec.decision);
    } else if (day >= split.test_start_day() && day < split.test_end_day()) {
      it->second.test_x.push_back(rec.task.features);
      it->second.test_y.push_back(rec.decision);
    }
  }

  // Retention mirrors the data-cleaning rules: enough test reviews to
  // estimate rates, and at least one training row to fit on.
  std::vector<const WorkerData*> retained;
  for (int i = 0; i < scenario.roster.n_workers(); ++i) {
    const WorkerData& wd = by_worker.at(scenario.roster.worker_ids[i]);
    if (static_cast<int>(wd.test_y.size()) < split.min_test_reviews) {
      std::ostringstream os;
      os << "worker " << wd.id << ": " << wd.test_y.size() << " test reviews, needs "
         << split.min_test_reviews;
      cat.exclusions.push_back(os.str());
      continue;
    }
    if (wd.train_y.empty()) {
      cat.exclusions.push_back("worker " + wd.id + ": no training rows in window");
      continue;
    }
    retained.push_back(&wd);
  }
  if (retained.empty()) throw ValidationError("catalog: no worker passed the retention filters");
  const int n_workers = static_cast<int>(retained.size());

  // Allocation-window tasks, minus those historically routed to dropped
  // workers (their capacity leaves with them).
  std::map<std::string, std::string> routed_to;  // task id -> worker id, window only
  for (const auto& rec : scenario.records) {
    if (rec.task.day >= split.opt_start_day() && rec.task.day < split.opt_end_day())
      routed_to[rec.task.id] = rec.worker_id;
  }
  std::vector<std::string> kept_ids(n_workers);
  for (int i = 0; i < n_workers; ++i) kept_ids[i] = retained[i]->id;
  int dropped_tasks = 0;
  std::vector<TaskInstance> window_tasks;
  for (const auto& task : scenario.tasks) {
    if (task.day < split.opt_start_day() || task.day >= split.opt_end_day()) continue;
    auto it = routed_to.find(task.id);
    if (it != routed_to.end() &&
        std::find(kept_ids.begin(), kept_ids.end(), it->second) == kept_ids.end()) {
      dropped_tasks++;
      continue;
    }
    TaskInstance local = task;
    local.day = task.day - split.opt_start_day();
    window_tasks.push_back(std::move(local));
  }
  if (dropped_tasks > 0) {
    std::ostringstream os;
    os << dropped_tasks << " window task(s) dropped with their excluded workers";
    cat.exclusions.push_back(os.str());
  }
  if (window_tasks.empty()) throw ValidationError("catalog: allocation window has no tasks");

  // Standardize on the retained training rows only.
  {
    std::vector<std::vector<double>> pooled;
    for (const WorkerData* wd : retained)
      pooled.insert(pooled.end(), wd->train_x.begin(), wd->train_x.end());
    cat.scaler.fit(pooled);
  }
  auto task_features = [&](const TaskInstance& t) { return cat.scaler.transform(t.features); };
  std::vector<std::vector<double>> window_x(window_tasks.size());
  for (size_t j = 0; j < window_tasks.size(); ++j) window_x[j] = task_features(window_tasks[j]);

  std::vector<std::vector<std::vector<double>>> train_x(n_workers), test_x(n_workers);
  for (int i = 0; i < n_workers; ++i) {
    train_x[i] = cat.scaler.transform_all(retained[i]->train_x);
    test_x[i] = cat.scaler.transform_all(retained[i]->test_x);
  }

  // Model families.  Seeds hang off the family name alone so a worker's
  // candidates are bit-identical across catalog modes.
  if (need_individual) {
    cat.individual_models.resize(n_workers);
    cat.individual_lambda.resize(n_workers);
    for (int i = 0; i < n_workers; ++i) {
      cat.individual_models[i] =
          fit_logistic_cv(train_x[i], retained[i]->train_y, cfg,
                          std::min<int>(10, static_cast<int>(train_x[i].size())),
                          mix_seed(cfg.seed, "individual:" + retained[i]->id),
                          &cat.individual_lambda[i]);
    }
  }

  std::vector<std::vector<double>> pooled_x;
  std::vector<int> pooled_y;
  if (need_aggregate) {
    for (int i = 0; i < n_workers; ++i) {
      pooled_x.insert(pooled_x.end(), train_x[i].begin(), train_x[i].end());
      pooled_y.insert(pooled_y.end(), retained[i]->train_y.begin(), retained[i]->train_y.end());
    }
    cat.aggregate_model =
        fit_forest_cv(pooled_x, pooled_y, cfg, mix_seed(cfg.seed, "aggregate"), &cat.aggregate_leaf);
    cat.agg_raw.resize(window_tasks.size());
    for (size_t j = 0; j < window_tasks.size(); ++j)
      cat.agg_raw[j] = predict_proba(cat.aggregate_model, window_x[j]);
  }

  if (need_profile) {
    // Cluster workers by how the shared model matches their own training
    // decisions: in-sample smoothed (TPR, TNR) of thresholded predictions.
    cat.profile_points.resize(n_workers);
    std::vector<std::vector<double>> points(n_workers, std::vector<double>(2));
    for (int i = 0; i < n_workers; ++i) {
      std::vector<int> predicted(train_x[i].size());
      for (size_t r = 0; r < train_x[i].size(); ++r)
        predicted[r] = predict_proba(cat.aggregate_model, train_x[i][r]) >= 0.5 ? 1 : 0;
      ClassifierMetrics m = confusion_rates(predicted, retained[i]->train_y, 1.0);
      cat.profile_points[i] = {m.tpr, m.tnr};
      points[i] = {m.tpr, m.tnr};
    }
    const int k = profile_cluster_count(split.train_months, cfg.profile_k, n_workers);
    KmeansResult km = kmeans(points, k, mix_seed(cfg.seed, "profile-kmeans"), cfg.kmeans_restarts);
    cat.profile_assignment = km.assignment;
    cat.profile_models.resize(k);
    cat.profile_lambda.resize(k);
    for (int c = 0; c < k; ++c) {
      std::vector<std::vector<double>> cx;
      std::vector<int> cy;
      for (int i = 0; i < n_workers; ++i) {
        if (cat.profile_assignment[i] != c) continue;
        cx.insert(cx.end(), train_x[i].begin(), train_x[i].end());
        cy.insert(cy.end(), retained[i]->train_y.begin(), retained[i]->train_y.end());
      }
      if (cx.empty()) throw ValidationError("catalog: profile cluster without training rows");
      cat.profile_models[c] = fit_logistic_cv(cx, cy, cfg, cfg.cv_folds,
                                              mix_seed(cfg.seed, "profile:" + std::to_string(c)),
                                              &cat.profile_lambda[c]);
    }
  }

  // Candidate lists, conditional rates, and the expectation tensor.
  std::vector<ModelKind> order;
  if (is_dao) {
    order = {ModelKind::Individual, ModelKind::Aggregate, ModelKind::Profile};
  } else if (mode == "uao-individual") {
    order = {ModelKind::Individual};
  } else if (mode == "uao-aggregate") {
    order = {ModelKind::Aggregate};
  } else {
    order = {ModelKind::Profile};
  }
  const int n_models = static_cast<int>(order.size());
  const int n_tasks = static_cast<int>(window_tasks.size());

  auto raw_prob = [&](int i, ModelKind kind, const std::vector<double>& feats, size_t j_hint,
                      bool is_window) -> double {
    switch (kind) {
      case ModelKind::Individual: return predict_proba(cat.individual_models[i], feats);
      case ModelKind::Aggregate:
        return is_window ? cat.agg_raw[j_hint] : predict_proba(cat.aggregate_model, feats);
      case ModelKind::Profile:
        return predict_proba(cat.profile_models[cat.profile_assignment[i]], feats);
    }
    return 0.0;
  };

  cat.candidates.assign(n_workers, {});
  Tensor3 expectation(n_workers, n_tasks, n_models);
  for (int i = 0; i < n_workers; ++i) {
    for (int m = 0; m < n_models; ++m) {
      std::vector<double> test_probs(test_x[i].size());
      for (size_t r = 0; r < test_x[i].size(); ++r)
        test_probs[r] = raw_prob(i, order[m], test_x[i][r], 0, false);
      WorkerModelStats st = rate_stats(order[m], test_probs, retained[i]->test_y);
      for (int j = 0; j < n_tasks; ++j) {
        double p = raw_prob(i, order[m], window_x[j], static_cast<size_t>(j), true);
        expectation.at(i, j, m) = adjusted_expectation(p, st.ppv_hat, st.for_hat);
      }
      cat.candidates[i].push_back(std::move(st));
    }
  }

  // Assemble the solver-ready problem for the retained roster.
  AllocationProblem& p = cat.problem;
  p.roster.worker_ids = kept_ids;
  p.roster.capacity.resize(n_workers);
  for (int i = 0; i < n_workers; ++i)
    p.roster.capacity[i] = scenario.roster.capacity.at(retained[i]->roster_row);
  p.tasks = std::move(window_tasks);
  p.expectation = std::move(expectation);
  p.candidate_counts.assign(n_workers, n_models);
  return cat;
}

Json catalog_to_json(const ModelCatalog& c) {
  Json j;
  j["mode"] = c.mode;
  Json split;
  split["train_months"] = c.split.train_months;
  split["test_months"] = c.split.test_months;
  split["opt_months"] = c.split.opt_months;
  split["days_per_month"] = c.split.days_per_month;
  split["horizon_months"] = c.split.horizon_months;
  split["min_test_reviews"] = c.split.min_test_reviews;
  j["split"] = split;
  j["worker_ids"] = c.worker_ids();
  j["exclusions"] = c.exclusions;

  Json workers = Json::array();
  for (size_t i = 0; i < c.candidates.size(); ++i) {
    Json w;
    w["worker_id"] = c.worker_ids()[i];
    Json cands = Json::array();
    for (const auto& st : c.candidates[i]) {
      Json s;
      s["kind"] = to_string(st.kind);
      s["ppv_hat"] = st.ppv_hat;
      s["for_hat"] = st.for_hat;
      if (st.test_auc) s["test_auc"] = *st.test_auc;
      s["test_rows"] = st.test_rows;
      cands.push_back(std::move(s));
    }
    w["candidates"] = std::move(cands);
    workers.push_back(std::move(w));
  }
  j["workers"] = std::move(workers);

  Json models;
  if (!c.individual_models.empty()) {
    Json fam = Json::array();
    for (size_t i = 0; i < c.individual_models.size(); ++i) {
      Json m;
      m["worker_id"] = c.worker_ids()[i];
      m["lambda"] = c.individual_lambda[i];
      m["single_class"] = c.individual_models[i].single_class;
      fam.push_back(std::move(m));
    }
    models["individual"] = std::move(fam);
  }
  if (!c.aggregate_model.trees.empty()) {
    Json m;
    m["n_trees"] = c.aggregate_model.n_trees;
    m["min_samples_leaf"] = c.aggregate_leaf;
    models["aggregate"] = std::move(m);
  }
  if (!c.profile_models.empty()) {
    Json m;
    m["assignment"] = c.profile_assignment;
    Json pts = Json::array();
    for (const auto& pt : c.profile_points) pts.push_back(Json::array({pt[0], pt[1]}));
    m["points"] = std::move(pts);
    m["lambda"] = c.profile_lambda;
    models["profile"] = std::move(m);
  }
  j["models"] = std::move(models);

  Json problem;
  Json roster;
  roster["worker_ids"] = c.problem.roster.worker_ids;
  roster["capacity"] = c.problem.roster.capacity;
  problem["roster"] = std::move(roster);
  Json tasks = Json::array();
  for (const auto& t : c.problem.tasks) {
    Json task;
    task["id"] = t.id;
    task["day"] = t.day;
    task["features"] = t.features;
    task["value"] = t.value;
    tasks.push_back(std::move(task));
  }
  problem["tasks"] = std::move(tasks);
  problem["candidate_counts"] = c.problem.candidate_counts;
  Json tensor;
  tensor["dims"] = Json::array({c.problem.expectation.dim0(), c.problem.expectation.dim1(),
                                c.problem.expectation.dim2()});
  tensor["data"] = c.problem.expectation.raw();
  problem["expectation"] = std::move(tensor);
  j["problem"] = std::move(problem);
  if (!c.agg_raw.empty()) j["aggregate_raw"] = c.agg_raw;
  return j;
}

ModelCatalog catalog_from_json(const Json& j) {
  ModelCatalog c;
  try {
    c.mode = j.at("mode").get<std::string>();
    const Json& split = j.at("split");
    c.split.train_months = split.at("train_months").get<int>();
    c.split.test_months = split.at("test_months").get<int>();
    c.split.opt_months = split.at("opt_months").get<int>();
    c.split.days_per_month = split.at("days_per_month").get<int>();
    c.split.horizon_months = split.at("horizon_months").get<int>();
    c.split.min_test_reviews = split.at("min_test_reviews").get<int>();
    c.exclusions = j.at("exclusions").get<std::vector<std::string>>();

    const Json& problem = j.at("problem");
    c.problem.roster.worker_ids = problem.at("roster").at("worker_ids").get<std::vector<std::string>>();
    c.problem.roster.capacity =
        problem.at("roster").at("capacity").get<std::vector<std::vector<int>>>();
    for (const auto& task : problem.at("tasks")) {
      TaskInstance t;
      t.id = task.at("id").get<std::string>();
      t.day = task.at("day").get<int>();
      t.features = task.at("features").get<std::vector<double>>();
      t.value = task.at("value").get<double>();
      c.problem.tasks.push_back(std::move(t));
    }
    c.problem.candidate_counts = problem.at("candidate_counts").get<std::vector<int>>();
    const Json& tensor = problem.at("expectation");
    auto dims = tensor.at("dims").get<std::vector<int>>();
    if (dims.size() != 3) throw ValidationError("catalog: expectation dims must have rank 3");
    Tensor3 e(dims[0], dims[1], dims[2]);
    auto data = tensor.at("data").get<std::vector<double>>();
    if (data.size() != e.raw().size())
      throw ValidationError("catalog: expectation data does not match dims");
    e.raw() = std::move(data);
    c.problem.expectation = std::move(e);

    for (const auto& w : j.at("workers")) {
      std::vector<WorkerModelStats> stats;
      for (const auto& s : w.at("candidates")) {
        WorkerModelStats st;
        st.kind = model_kind_from_string(s.at("kind").get<std::string>());
        st.ppv_hat = s.at("ppv_hat").get<double>();
        st.for_hat = s.at("for_hat").get<double>();
        if (s.contains("test_auc")) st.test_auc = s.at("test_auc").get<double>();
        st.test_rows = s.at("test_rows").get<int>();
        stats.push_back(st);
      }
      c.candidates.push_back(std::move(stats));
    }
    if (j.contains("aggregate_raw")) c.agg_raw = j.at("aggregate_raw").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("catalog: ") + e.what());
  }
  if (c.candidates.size() != c.problem.roster.worker_ids.size())
    throw ValidationError("catalog: candidate stats do not match the roster");
  return c;
}

}  // namespace wfa
