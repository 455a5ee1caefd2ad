#include "wfa/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wfa/util.hpp"

namespace wfa {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError("scenario config: " + msg);
}

std::string padded_id(char prefix, int value, int width) {
  std::ostringstream os;
  os << prefix;
  std::string digits = std::to_string(value);
  for (int i = static_cast<int>(digits.size()); i < width; ++i) os << '0';
  os << digits;
  return os.str();
}

// Draws an index from unnormalised non-negative weights.
int sample_categorical(const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  std::uniform_real_distribution<double> unif(0.0, total);
  double u = unif(rng);
  double acc = 0.0;
  for (size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

ScenarioConfig scenario_config_from_json(const Json& j) {
  ScenarioConfig c;
  try {
    if (j.contains("n_workers")) c.n_workers = j.at("n_workers").get<int>();
    if (j.contains("n_clusters")) c.n_clusters = j.at("n_clusters").get<int>();
    if (j.contains("feature_dim")) c.feature_dim = j.at("feature_dim").get<int>();
    if (j.contains("n_months")) c.n_months = j.at("n_months").get<int>();
    if (j.contains("days_per_month")) c.days_per_month = j.at("days_per_month").get<int>();
    if (j.contains("tasks_per_day_mean")) c.tasks_per_day_mean = j.at("tasks_per_day_mean").get<double>();
    if (j.contains("capacity_weight_shape")) c.capacity_weight_shape = j.at("capacity_weight_shape").get<double>();
    if (j.contains("routing_affinity")) c.routing_affinity = j.at("routing_affinity").get<double>();
    if (j.contains("sigma_base")) c.sigma_base = j.at("sigma_base").get<double>();
    if (j.contains("sigma_cluster")) c.sigma_cluster = j.at("sigma_cluster").get<double>();
    if (j.contains("sigma_indiv")) c.sigma_indiv = j.at("sigma_indiv").get<double>();
    if (j.contains("accept_bias")) c.accept_bias = j.at("accept_bias").get<double>();
    if (j.contains("sigma_bias")) c.sigma_bias = j.at("sigma_bias").get<double>();
    if (j.contains("value_alpha")) c.value_alpha = j.at("value_alpha").get<double>();
    if (j.contains("value_noise")) c.value_noise = j.at("value_noise").get<double>();
    if (j.contains("mixture_components")) c.mixture_components = j.at("mixture_components").get<int>();
    if (j.contains("mixture_spread")) c.mixture_spread = j.at("mixture_spread").get<double>();
    if (j.contains("mixture_scale_min")) c.mixture_scale_min = j.at("mixture_scale_min").get<double>();
    if (j.contains("mixture_scale_max")) c.mixture_scale_max = j.at("mixture_scale_max").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("scenario config: ") + e.what());
  }
  return c;
}

Json scenario_config_to_json(const ScenarioConfig& c) {
  Json j;
  j["n_workers"] = c.n_workers;
  j["n_clusters"] = c.n_clusters;
  j["feature_dim"] = c.feature_dim;
  j["n_months"] = c.n_months;
  j["days_per_month"] = c.days_per_month;
  j["tasks_per_day_mean"] = c.tasks_per_day_mean;
  j["capacity_weight_shape"] = c.capacity_weight_shape;
  j["routing_affinity"] = c.routing_affinity;
  j["sigma_base"] = c.sigma_base;
  j["sigma_cluster"] = c.sigma_cluster;
  j["sigma_indiv"] = c.sigma_indiv;
  j["accept_bias"] = c.accept_bias;
  j["sigma_bias"] = c.sigma_bias;
  j["value_alpha"] = c.value_alpha;
  j["value_noise"] = c.value_noise;
  j["mixture_components"] = c.mixture_components;
  j["mixture_spread"] = c.mixture_spread;
  j["mixture_scale_min"] = c.mixture_scale_min;
  j["mixture_scale_max"] = c.mixture_scale_max;
  j["seed"] = c.seed;
  return j;
}

Json ground_truth_to_json(const GroundTruth& t) {
  Json j;
  j["worker_ids"] = t.worker_ids;
  j["weights"] = t.weights;
  j["biases"] = t.biases;
  j["cluster"] = t.cluster;
  j["value_alpha"] = t.value_alpha;
  j["value_noise"] = t.value_noise;
  return j;
}

GroundTruth ground_truth_from_json(const Json& j) {
  GroundTruth t;
  try {
    t.worker_ids = j.at("worker_ids").get<std::vector<std::string>>();
    t.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    t.biases = j.at("biases").get<std::vector<double>>();
    t.cluster = j.at("cluster").get<std::vector<int>>();
    t.value_alpha = j.at("value_alpha").get<double>();
    t.value_noise = j.at("value_noise").get<double>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("ground truth: ") + e.what());
  }
  if (t.weights.size() != t.worker_ids.size() || t.cluster.size() != t.worker_ids.size() ||
      t.biases.size() != t.worker_ids.size())
    throw ValidationError("ground truth: weights/biases/cluster size must match worker_ids");
  return t;
}

GeneratedScenario generate_scenario(const ScenarioConfig& cfg) {
  require(cfg.n_workers >= 1, "n_workers must be >= 1");
  require(cfg.n_clusters >= 1 && cfg.n_clusters <= cfg.n_workers,
          "n_clusters must be in [1, n_workers]");
  require(cfg.feature_dim >= 1, "feature_dim must be >= 1");
  require(cfg.n_months >= 1, "n_months must be >= 1");
  require(cfg.days_per_month >= 1, "days_per_month must be >= 1");
  require(cfg.tasks_per_day_mean > 0.0, "tasks_per_day_mean must be > 0");
  require(cfg.capacity_weight_shape > 0.0, "capacity_weight_shape must be > 0");
  require(cfg.routing_affinity >= 0.0, "routing_affinity must be >= 0");
  require(cfg.sigma_base >= 0.0 && cfg.sigma_cluster >= 0.0 && cfg.sigma_indiv >= 0.0 &&
              cfg.sigma_bias >= 0.0,
          "sigma_* must be >= 0");
  require(cfg.value_noise >= 0.0, "value_noise must be >= 0");
  require(cfg.mixture_components >= 1, "mixture_components must be >= 1");
  require(cfg.mixture_scale_min > 0.0 && cfg.mixture_scale_max >= cfg.mixture_scale_min,
          "mixture scales must satisfy 0 < min <= max");

  const int n = cfg.n_workers;
  const int d = cfg.feature_dim;
  const int total_days = cfg.n_months * cfg.days_per_month;
  const int opt_start = (cfg.n_months - 1) * cfg.days_per_month;

  GeneratedScenario out;
  GroundTruth& truth = out.truth;
  Scenario& sc = out.scenario;

  const int id_width = std::max<int>(2, static_cast<int>(std::to_string(n - 1).size()));
  truth.worker_ids.reserve(n);
  for (int i = 0; i < n; ++i) truth.worker_ids.push_back(padded_id('w', i, id_width));
  truth.value_alpha = cfg.value_alpha;
  truth.value_noise = cfg.value_noise;

  // Hierarchical decision weights: shared base + per-cluster offset +
  // per-worker deviation, plus a per-worker intercept (risk tolerance).
  // Workers are dealt to clusters round-robin.
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, "worker-weights"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> base(d);
    for (double& b : base) b = cfg.sigma_base * gauss(rng);
    std::vector<std::vector<double>> offset(cfg.n_clusters, std::vector<double>(d));
    for (auto& row : offset)
      for (double& o : row) o = cfg.sigma_cluster * gauss(rng);
    truth.weights.assign(n, std::vector<double>(d));
    truth.biases.resize(n);
    truth.cluster.resize(n);
    for (int i = 0; i < n; ++i) {
      truth.cluster[i] = i % cfg.n_clusters;
      for (int f = 0; f < d; ++f)
        truth.weights[i][f] = base[f] + offset[truth.cluster[i]][f] + cfg.sigma_indiv * gauss(rng);
      truth.biases[i] = cfg.accept_bias + cfg.sigma_bias * gauss(rng);
    }
  }

  // Task features from a Gaussian mixture: component means/scales first,
  // then per day a Poisson count and per task a component draw + noise.
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, "tasks"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> scale_unif(cfg.mixture_scale_min, cfg.mixture_scale_max);
    std::vector<std::vector<double>> mu(cfg.mixture_components, std::vector<double>(d));
    std::vector<std::vector<double>> sigma(cfg.mixture_components, std::vector<double>(d));
    for (int k = 0; k < cfg.mixture_components; ++k)
      for (int f = 0; f < d; ++f) {
        mu[k][f] = cfg.mixture_spread * gauss(rng);
        sigma[k][f] = scale_unif(rng);
      }
    std::poisson_distribution<int> pois(cfg.tasks_per_day_mean);
    std::uniform_int_distribution<int> comp(0, cfg.mixture_components - 1);
    int counter = 0;
    for (int day = 0; day < total_days; ++day) {
      int n_tasks = std::max(1, pois(rng));
      for (int t = 0; t < n_tasks; ++t) {
        TaskInstance task;
        task.id = padded_id('t', counter++, 6);
        task.day = day;
        task.features.resize(d);
        int k = comp(rng);
        for (int f = 0; f < d; ++f) task.features[f] = mu[k][f] + sigma[k][f] * gauss(rng);
        task.value = 0.0;  // filled below
        sc.tasks.push_back(std::move(task));
      }
    }
  }

  // Historical routing: per-worker propensities, one worker per task.  With
  // routing_affinity > 0 the per-task weights are tilted toward workers
  // inclined to accept that task (specialised dispatch), so each worker's
  // history covers a self-selected slice of task space rather than a uniform
  // sample of it.  Logits are shifted by their per-task max before
  // exponentiating to keep the weights finite at any affinity.
  std::vector<int> routed(sc.tasks.size());
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, "routing"));
    std::gamma_distribution<double> gamma(cfg.capacity_weight_shape, 1.0);
    std::vector<double> propensity(n);
    for (double& p : propensity) p = gamma(rng);
    std::vector<double> weight(n), logit(n);
    for (size_t j = 0; j < sc.tasks.size(); ++j) {
      const auto& feat = sc.tasks[j].features;
      double logit_max = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        double s = truth.biases[i];
        for (int f = 0; f < d; ++f) s += truth.weights[i][f] * feat[f];
        logit[i] = s;
        logit_max = std::max(logit_max, s);
      }
      for (int i = 0; i < n; ++i)
        weight[i] = propensity[i] * std::exp(cfg.routing_affinity * (logit[i] - logit_max));
      routed[j] = sample_categorical(weight, rng);
    }
  }

  // Historical accept/reject decisions from the true behaviour model.
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, "decisions"));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    sc.records.reserve(sc.tasks.size());
    for (size_t j = 0; j < sc.tasks.size(); ++j) {
      DecisionRecord rec;
      rec.worker_id = truth.worker_ids[routed[j]];
      rec.task = sc.tasks[j];
      double p = true_accept_prob(truth, routed[j], sc.tasks[j].features);
      rec.decision = unif(rng) < p ? 1 : 0;
      sc.records.push_back(std::move(rec));
    }
  }

  // Task values: load on cross-worker disagreement plus Gaussian noise.
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, "values"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& task : sc.tasks) {
      double v = cfg.value_alpha * disagreement(truth, task.features) + cfg.value_noise * gauss(rng);
      task.value = v;
      // keep the copy embedded in the matching record in sync
    }
    for (size_t j = 0; j < sc.records.size(); ++j) sc.records[j].task.value = sc.tasks[j].value;
  }

  // Roster capacity over the allocation window: each worker's historical
  // per-day task count there, so daily capacity exactly matches demand.
  sc.roster.worker_ids = truth.worker_ids;
  sc.roster.capacity.assign(n, std::vector<int>(cfg.days_per_month, 0));
  for (size_t j = 0; j < sc.tasks.size(); ++j) {
    if (sc.tasks[j].day >= opt_start)
      sc.roster.capacity[routed[j]][sc.tasks[j].day - opt_start] += 1;
  }

  sc.meta.feature_dim = d;
  sc.meta.days_per_month = cfg.days_per_month;
  sc.meta.n_months = cfg.n_months;
  sc.meta.opt_start_day = opt_start;
  sc.meta.seed = cfg.seed;
  return out;
}

double true_accept_prob(const GroundTruth& t, int worker_index, const std::vector<double>& features) {
  if (worker_index < 0 || worker_index >= static_cast<int>(t.weights.size()))
    throw std::out_of_range("true_accept_prob: worker index out of range");
  return sigmoid(dot(t.weights[worker_index], features) + t.biases[worker_index]);
}

double disagreement(const GroundTruth& t, const std::vector<double>& features) {
  std::vector<double> probs(t.weights.size());
  for (size_t i = 0; i < t.weights.size(); ++i)
    probs[i] = true_accept_prob(t, static_cast<int>(i), features);
  if (probs.empty()) return 0.0;
  return stddev_pop(probs) * stddev_pop(probs);
}

double realized_value(const AllocationSolution& s, const GroundTruth& t,
                      const std::vector<TaskInstance>& tasks,
                      const std::vector<std::string>& worker_ids) {
  std::vector<int> truth_index(worker_ids.size());
  for (size_t i = 0; i < worker_ids.size(); ++i) {
    auto it = std::find(t.worker_ids.begin(), t.worker_ids.end(), worker_ids[i]);
    if (it == t.worker_ids.end())
      throw ValidationError("realized_value: unknown worker id " + worker_ids[i]);
    truth_index[i] = static_cast<int>(it - t.worker_ids.begin());
  }
  if (s.x.size() != worker_ids.size())
    throw ValidationError("realized_value: solution rows do not match worker ids");
  double total = 0.0;
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (s.x[i].size() != tasks.size())
      throw ValidationError("realized_value: solution columns do not match tasks");
    for (size_t j = 0; j < tasks.size(); ++j) {
      if (s.x[i][j])
        total += true_accept_prob(t, truth_index[i], tasks[j].features) * tasks[j].value;
    }
  }
  return total;
}

}  // namespace wfa
