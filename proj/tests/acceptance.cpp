// Acceptance suite for the workforce-allocation toolkit.  Each numbered
// criterion prints one [PASS]/[FAIL] verdict line; the process exits nonzero
// if any criterion fails.  The qualitative-replication sweep (criterion 7)
// dominates the runtime and is executed first so its wall time is measured in
// isolation; every other criterion is evaluated afterwards in order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wfa/harness.hpp"
#include "wfa/learners/kmeans.hpp"
#include "wfa/learners/logistic.hpp"
#include "wfa/learners/metrics.hpp"
#include "wfa/util.hpp"

#include "helpers.hpp"

using namespace wfa;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void print_verdict(int idx, const std::string& name, const Verdict& v) {
  std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " " << idx << ". " << name;
  if (!v.detail.empty()) std::cout << " — " << v.detail;
  std::cout << "\n" << std::flush;
  if (!v.pass) ++g_failures;
}

Verdict guarded(const std::function<Verdict()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------
// 1. Exact solvers match brute-force enumeration on small seeded instances.

Verdict exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  for (uint64_t s = 1; s <= 60; ++s) {
    AllocationProblem p = wfa_test::random_problem(1000 + s);
    std::mt19937_64 rng(s);

    const double best = brute_force_dao(p).objective;
    worst = std::max(worst, std::fabs(solve_dao_exact(p).solution.objective - best));

    std::vector<int> m_of(p.n_workers());
    for (int i = 0; i < p.n_workers(); ++i)
      m_of[i] = std::uniform_int_distribution<int>(0, p.candidate_counts[i] - 1)(rng);
    AllocationProblem fixed = restrict_to_models(p, m_of);
    worst = std::max(worst,
                     std::fabs(solve_uao(fixed).objective - brute_force_dao(fixed).objective));

    std::vector<std::vector<uint8_t>> bhat(p.n_workers(),
                                           std::vector<uint8_t>(p.n_tasks(), 0));
    for (auto& row : bhat)
      for (auto& cell : row) cell = std::uniform_int_distribution<int>(0, 1)(rng);
    worst = std::max(worst, std::fabs(solve_dpo(p, bhat).objective -
                                      brute_force_dao(dpo_problem(p, bhat)).objective));
    ++n;
  }
  const double elapsed = secs_since(t0);
  Verdict v;
  v.pass = worst <= 1e-9 && elapsed < 10.0;
  v.detail = std::to_string(n) + " instances x 3 solvers, max deviation " + fmt(worst) + ", " +
             fmt(elapsed) + " s";
  return v;
}

// ---------------------------------------------------------------------------
// 2. Single-candidate instances: the joint solver reduces to fixed-model
//    allocation.

Verdict reduction() {
  double worst = 0.0;
  for (uint64_t s = 1; s <= 50; ++s) {
    AllocationProblem p = wfa_test::random_problem(2000 + s, 4, 8, 2, /*max_models=*/1);
    worst = std::max(worst,
                     std::fabs(solve_dao_exact(p).solution.objective - solve_uao(p).objective));
  }
  Verdict v;
  v.pass = worst <= 1e-9;
  v.detail = "50 single-candidate instances, max deviation " + fmt(worst);
  return v;
}

// ---------------------------------------------------------------------------
// 3. Dominance: joint selection is never worse than any fixed-family policy,
//    and bound >= exact >= heuristic, on every scenario this suite generates.

Verdict dominance(const SweepResult* sweep) {
  Verdict v;
  v.pass = true;
  int scenarios = 0;
  double slack_min = 1e300;  // most negative margin observed (>= -1e-9 passes)
  auto note = [&](double margin) { slack_min = std::min(slack_min, margin); };

  ScenarioConfig cfg;
  cfg.n_workers = 8;
  cfg.n_clusters = 3;
  cfg.feature_dim = 4;
  cfg.n_months = 7;
  cfg.days_per_month = 10;
  cfg.tasks_per_day_mean = 6.0;
  TrainingConfig training;
  training.lambda_grid = {1e-3, 1e-1};
  training.leaf_grid = {5, 20};
  training.n_trees = 40;
  training.cv_trees = 15;
  training.cv_folds = 3;
  training.kmeans_restarts = 4;

  for (uint64_t seed : {21, 22, 23}) {
    cfg.seed = seed;
    GeneratedScenario gen = generate_scenario(cfg);
    for (int window : {2, 3}) {
      SplitSpec split = make_split(gen.scenario.meta, window, /*min_test_reviews=*/10);
      training.seed = mix_seed(seed, "training");
      ModelCatalog dao = build_catalog(gen.scenario, split, "dao", training);
      DaoExactResult exact = solve_dao_exact(dao.problem);
      DaoHeuristicResult heur = solve_dao_heuristic(dao.problem, 4, 99);
      const double bound =
          dao_upper_bound(dao.problem, std::vector<int>(dao.problem.n_workers(), -1));
      note(bound - exact.solution.objective);
      note(exact.solution.objective - heur.solution.objective);
      for (const char* mode : {"uao-individual", "uao-aggregate", "uao-profile"}) {
        ModelCatalog cat = build_catalog(gen.scenario, split, mode, training);
        note(exact.solution.objective - solve_uao(cat.problem).objective);
      }
      ++scenarios;
    }
  }

  int cells = 0;
  if (sweep != nullptr) {
    // Group the sweep cells by (window, seed) and compare methods pairwise.
    std::map<std::pair<int, int>, std::map<std::string, double>> by_run;
    for (const SweepCell& c : sweep->cells) by_run[{c.window, c.seed_index}][c.method] = c.objective;
    for (const auto& [key, methods] : by_run) {
      const auto dao_it = methods.find("dao-exact");
      if (dao_it == methods.end()) continue;
      for (const char* m : {"uao-individual", "uao-aggregate", "uao-profile", "dao-heuristic"}) {
        const auto it = methods.find(m);
        if (it != methods.end()) note(dao_it->second - it->second);
      }
      ++cells;
    }
  }

  v.pass = slack_min >= -1e-9;
  v.detail = std::to_string(scenarios) + " built scenarios + " + std::to_string(cells) +
             " sweep runs, worst margin " + fmt(slack_min);
  return v;
}

// ---------------------------------------------------------------------------
// 4. Expectation adjustment: identity, collapse, range confinement, and
//    monotonicity sign over random (p, ppv, for) triples.

Verdict adjustment() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  long violations = 0;
  const long n = 100000;
  for (long t = 0; t < n; ++t) {
    const double p1 = U(rng), p2 = U(rng), ppv = U(rng), fo = U(rng);
    if (std::fabs(adjusted_expectation(p1, 1.0, 0.0) - p1) > 1e-12) ++violations;
    if (std::fabs(adjusted_expectation(p1, ppv, ppv) - ppv) > 1e-12) ++violations;
    const double a1 = adjusted_expectation(p1, ppv, fo);
    if (a1 < std::min(ppv, fo) - 1e-12 || a1 > std::max(ppv, fo) + 1e-12) ++violations;
    const double a2 = adjusted_expectation(p2, ppv, fo);
    // The adjusted value must move with p in the direction of ppv - for.
    if ((a2 - a1) * (p2 - p1) * (ppv - fo) < -1e-15) ++violations;
  }
  Verdict v;
  v.pass = violations == 0;
  v.detail = std::to_string(n) + " random triples, " + std::to_string(violations) + " violations";
  return v;
}

// ---------------------------------------------------------------------------
// 5. Learner checks: analytic gradient vs finite differences, rank-sum AUC
//    oracle, k-means inertia monotonicity.

double auc_pairwise(const std::vector<int>& labels, const std::vector<double>& scores) {
  double wins = 0.0;
  long pairs = 0;
  for (size_t a = 0; a < labels.size(); ++a) {
    for (size_t b = 0; b < labels.size(); ++b) {
      if (labels[a] == 1 && labels[b] == 0) {
        ++pairs;
        if (scores[a] > scores[b]) wins += 1.0;
        else if (scores[a] == scores[b]) wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

Verdict learner_checks() {
  std::mt19937_64 rng(55);
  std::normal_distribution<double> N(0.0, 1.5);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  // (a) analytic gradient against central finite differences.
  double grad_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int rows = std::uniform_int_distribution<int>(5, 40)(rng);
    const int dim = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<std::vector<double>> x(rows, std::vector<double>(dim));
    std::vector<int> y(rows);
    for (int r = 0; r < rows; ++r) {
      for (int d = 0; d < dim; ++d) x[r][d] = N(rng);
      y[r] = U(rng) < 0.5 ? 0 : 1;
    }
    const double lambda = std::pow(10.0, std::uniform_real_distribution<double>(-6, 1)(rng));
    std::vector<double> w(dim);
    for (double& wi : w) wi = N(rng);
    double b = N(rng);
    const auto [dw, db] = logistic_gradient(x, y, lambda, w, b);
    auto check = [&](double analytic, double* slot) {
      const double h = 1e-5 * std::max(1.0, std::fabs(*slot));
      const double kept = *slot;
      *slot = kept + h;
      const double up = logistic_loss(x, y, lambda, w, b);
      *slot = kept - h;
      const double down = logistic_loss(x, y, lambda, w, b);
      *slot = kept;
      const double numeric = (up - down) / (2.0 * h);
      grad_err = std::max(grad_err, std::fabs(analytic - numeric) / std::max(1.0, std::fabs(analytic)));
    };
    for (int d = 0; d < dim; ++d) check(dw[d], &w[d]);
    check(db, &b);
  }

  // (b) rank-sum AUC equals the pairwise oracle.
  double auc_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 30)(rng);
    std::vector<int> labels(n);
    std::vector<double> scores(n);
    bool has0 = false, has1 = false;
    do {
      has0 = has1 = false;
      for (int i = 0; i < n; ++i) {
        labels[i] = U(rng) < 0.5 ? 0 : 1;
        has0 |= labels[i] == 0;
        has1 |= labels[i] == 1;
      }
    } while (!has0 || !has1);
    const bool coarse = trial % 2 == 0;  // force heavy ties on half the sets
    for (int i = 0; i < n; ++i)
      scores[i] = coarse ? std::uniform_int_distribution<int>(0, 9)(rng) / 10.0 : U(rng);
    auc_err = std::max(auc_err, std::fabs(roc_auc(labels, scores) - auc_pairwise(labels, scores)));
  }

  // (c) k-means inertia never increases within a restart.
  long trace_violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(5, 60)(rng);
    const int dim = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
      const double center = 3.0 * std::uniform_int_distribution<int>(-1, 1)(rng);
      for (double& c : p) c = center + N(rng);
    }
    const int k = std::uniform_int_distribution<int>(1, std::min(6, n))(rng);
    KmeansResult km = kmeans(pts, k, 600 + trial, /*n_init=*/4);
    for (const auto& trace : km.traces)
      for (size_t step = 1; step < trace.size(); ++step)
        if (trace[step] > trace[step - 1] + 1e-9) ++trace_violations;
  }

  Verdict v;
  v.pass = grad_err <= 1e-4 && auc_err <= 1e-12 && trace_violations == 0;
  v.detail = "gradient max rel err " + fmt(grad_err) + "; auc max dev " + fmt(auc_err) +
             "; inertia violations " + std::to_string(trace_violations);
  return v;
}

// ---------------------------------------------------------------------------
// 6. Random-baseline calibration: Monte Carlo mean within three standard
//    errors of exact enumeration of the sampling process.

Verdict baseline_calibration() {
  int n = 0;
  double worst_z = 0.0;
  for (uint64_t s = 0; s < 24; ++s) {
    AllocationProblem p =
        wfa_test::random_problem(7000 + s, /*max_workers=*/3, /*max_tasks=*/5, /*max_days=*/1,
                                 /*max_models=*/2);
    const double exact = wfa_test::random_policy_expectation(p);
    const RandomPolicyStats mc = random_policy_value(p, 20000, 500 + s);
    const double gap = std::fabs(mc.mean - exact);
    worst_z = std::max(worst_z, gap / (mc.std_error + 1e-12));
    if (gap > 3.0 * mc.std_error + 1e-9) {
      return {false, "instance seed " + std::to_string(7000 + s) + " off by " + fmt(gap) +
                         " (3 SE = " + fmt(3.0 * mc.std_error) + ")"};
    }
    ++n;
  }
  return {true, std::to_string(n) + " enumerable instances, worst |z| = " + fmt(worst_z)};
}

// ---------------------------------------------------------------------------
// 7. Qualitative replication on the default synthetic config.

struct ReplicationData {
  std::optional<SweepResult> sweep;
  std::vector<double> correlations;
  double elapsed = 0.0;
  std::string error;
};

ReplicationData run_replication() {
  ReplicationData data;
  const auto t0 = Clock::now();
  try {
    SweepOptions sw;
    sw.windows = {3, 18};
    sw.n_seeds = 20;
    ScenarioConfig cfg;       // stock generator settings
    TrainingConfig training;  // stock training settings
    std::cout << "running training-window sweep: windows {3,18} x " << sw.n_seeds
              << " seeds x " << sw.run.methods.size() << " methods (this is the long pole) ..."
              << std::endl;
    data.sweep = sweep_training_window(cfg, training, sw);
    std::cout << "sweep finished in " << fmt(secs_since(t0)) << " s" << std::endl;

    // Disagreement-value link, measured directly on freshly generated
    // scenarios (one correlation per seed).
    for (uint64_t s = 0; s < 20; ++s) {
      ScenarioConfig c;  // stock settings apart from the seed
      c.seed = 910000 + s;
      GeneratedScenario gen = generate_scenario(c);
      std::vector<double> spread, value;
      spread.reserve(gen.scenario.tasks.size());
      value.reserve(gen.scenario.tasks.size());
      for (const TaskInstance& t : gen.scenario.tasks) {
        spread.push_back(disagreement(gen.truth, t.features));
        value.push_back(t.value);
      }
      data.correlations.push_back(pearson(spread, value));
    }
  } catch (const std::exception& e) {
    data.error = e.what();
  }
  data.elapsed = secs_since(t0);
  return data;
}

const SweepSummaryRow* find_row(const SweepResult& r, int window, const std::string& method) {
  for (const auto& row : r.summary)
    if (row.window == window && row.method == method) return &row;
  return nullptr;
}

Verdict replication_trends(const ReplicationData& data) {
  if (!data.sweep) return {false, "sweep failed: " + data.error};
  const SweepResult& sweep = *data.sweep;
  std::ostringstream detail;
  bool pass = true;

  // (a) every method clears the random baseline in the median.
  double worst_improvement = 1e300;
  for (const auto& row : sweep.summary)
    worst_improvement = std::min(worst_improvement, row.median_pct_improvement);
  pass &= worst_improvement > 0.0;
  detail << "min median improvement " << fmt(worst_improvement) << "%";

  // (b) profile vs individual flips between the short and the long window.
  const auto* prof3 = find_row(sweep, 3, "uao-profile");
  const auto* indiv3 = find_row(sweep, 3, "uao-individual");
  const auto* prof18 = find_row(sweep, 18, "uao-profile");
  const auto* indiv18 = find_row(sweep, 18, "uao-individual");
  if (prof3 && indiv3 && prof18 && indiv18) {
    const bool short_ok = prof3->median_pct_improvement >= indiv3->median_pct_improvement;
    const bool long_ok = indiv18->median_pct_improvement >= prof18->median_pct_improvement;
    pass &= short_ok && long_ok;
    detail << "; 3mo profile " << fmt(prof3->median_pct_improvement) << "% vs indiv "
           << fmt(indiv3->median_pct_improvement) << "%, 18mo indiv "
           << fmt(indiv18->median_pct_improvement) << "% vs profile "
           << fmt(prof18->median_pct_improvement) << "%";
  } else {
    pass = false;
    detail << "; missing summary rows";
  }

  // (c) the share of per-worker models selected by joint optimization grows
  //     with the training window.
  const auto* dao3 = find_row(sweep, 3, "dao-exact");
  const auto* dao18 = find_row(sweep, 18, "dao-exact");
  if (dao3 && dao18 && dao3->median_individual_share && dao18->median_individual_share) {
    pass &= *dao18->median_individual_share >= *dao3->median_individual_share;
    detail << "; individual share " << fmt(*dao3->median_individual_share) << " -> "
           << fmt(*dao18->median_individual_share);
  } else {
    pass = false;
    detail << "; missing selection shares";
  }

  // (d) task value correlates positively with cross-worker disagreement.
  if (!data.correlations.empty()) {
    std::vector<double> corr = data.correlations;
    const double med = median(corr);
    pass &= med > 0.0;
    detail << "; median disagreement-value corr " << fmt(med);
  } else {
    pass = false;
    detail << "; no correlation samples";
  }

  pass &= data.elapsed <= 1800.0;
  detail << "; " << fmt(data.elapsed) << " s (budget 1800)";
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Determinism: repeated runs produce byte-identical scenario files and
//    reports.

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Verdict determinism() {
  ScenarioConfig cfg;
  cfg.n_workers = 8;
  cfg.n_clusters = 3;
  cfg.feature_dim = 4;
  cfg.n_months = 6;
  cfg.days_per_month = 10;
  cfg.tasks_per_day_mean = 6.0;
  cfg.seed = 4242;

  const fs::path dir = fs::temp_directory_path() / "wfa-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  GeneratedScenario gen1 = generate_scenario(cfg);
  GeneratedScenario gen2 = generate_scenario(cfg);
  save_scenario(gen1.scenario, (dir / "s1.json").string());
  save_scenario(gen2.scenario, (dir / "s2.json").string());
  const bool scenario_ok = file_bytes(dir / "s1.json") == file_bytes(dir / "s2.json") &&
                           ground_truth_to_json(gen1.truth).dump() ==
                               ground_truth_to_json(gen2.truth).dump();

  TrainingConfig training;
  training.lambda_grid = {1e-3, 1e-1};
  training.leaf_grid = {5, 20};
  training.n_trees = 30;
  training.cv_trees = 15;
  training.cv_folds = 3;
  training.kmeans_restarts = 4;
  RunOptions run;
  run.train_months = 2;
  run.min_test_reviews = 10;
  run.baseline_samples = 2000;
  run.heuristic_restarts = 2;
  run.seed = 5;
  const std::string report1 =
      report_to_json(run_pipeline(gen1.scenario, &gen1.truth, run, training)).dump(2);
  const std::string report2 =
      report_to_json(run_pipeline(gen2.scenario, &gen2.truth, run, training)).dump(2);

  SweepOptions sw;
  sw.windows = {2};
  sw.n_seeds = 2;
  sw.master_seed = 11;
  sw.run = run;
  sw.run.methods = {"uao-aggregate", "dao-heuristic"};
  const std::string summary1 = sweep_summary_json(sweep_training_window(cfg, training, sw)).dump(2);
  const std::string summary2 = sweep_summary_json(sweep_training_window(cfg, training, sw)).dump(2);

  Verdict v;
  v.pass = scenario_ok && report1 == report2 && summary1 == summary2;
  v.detail = std::string("scenario files ") + (scenario_ok ? "identical" : "DIFFER") +
             ", pipeline reports " + (report1 == report2 ? "identical" : "DIFFER") +
             ", sweep summaries " + (summary1 == summary2 ? "identical" : "DIFFER");
  return v;
}

}  // namespace

int main() {
  std::cout << "workforce-allocation acceptance suite\n" << std::flush;
  const auto t0 = Clock::now();

  const ReplicationData replication = run_replication();

  print_verdict(1, "exact solvers match brute force", guarded(exactness));
  print_verdict(2, "single-candidate reduction", guarded(reduction));
  print_verdict(3, "dominance ordering",
                guarded([&] { return dominance(replication.sweep ? &*replication.sweep : nullptr); }));
  print_verdict(4, "expectation adjustment properties", guarded(adjustment));
  print_verdict(5, "learner primitives", guarded(learner_checks));
  print_verdict(6, "random-baseline calibration", guarded(baseline_calibration));
  print_verdict(7, "qualitative replication", guarded([&] { return replication_trends(replication); }));
  print_verdict(8, "pipeline determinism", guarded(determinism));

  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criterion(s) failed")
            << " in " << fmt(secs_since(t0)) << " s\n";
  return g_failures == 0 ? 0 : 1;
}
