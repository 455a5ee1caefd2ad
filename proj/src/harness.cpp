#include "wfa/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "wfa/util.hpp"

namespace wfa {

const std::vector<std::string> kAllMethods = {"dpo",         "uao-individual", "uao-aggregate",
                                              "uao-profile", "dao-exact",      "dao-heuristic"};

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Model family a method allocates with; empty means every family (dao).
std::vector<ModelKind> families_of(const std::string& method) {
  if (method == "dpo" || method == "uao-aggregate") return {ModelKind::Aggregate};
  if (method == "uao-individual") return {ModelKind::Individual};
  if (method == "uao-profile") return {ModelKind::Profile};
  if (method == "dao-exact" || method == "dao-heuristic") return {};
  throw ValidationError("unknown method: " + method);
}

int candidate_column(const ModelCatalog& cat, ModelKind kind) {
  for (size_t m = 0; m < cat.candidates.at(0).size(); ++m) {
    if (cat.candidates[0][m].kind == kind) return static_cast<int>(m);
  }
  throw ValidationError(std::string("catalog lacks a ") + to_string(kind) + " candidate");
}

// Row-weighted mean of per-worker test AUC for the worker's candidate in
// column `col(i)`; workers whose AUC is undefined are skipped.
std::optional<double> weighted_auc(const ModelCatalog& cat, const std::vector<int>& col) {
  double num = 0.0;
  long den = 0;
  for (size_t i = 0; i < cat.candidates.size(); ++i) {
    const WorkerModelStats& st = cat.candidates[i][col[i]];
    if (!st.test_auc) continue;
    num += *st.test_auc * st.test_rows;
    den += st.test_rows;
  }
  if (den == 0) return std::nullopt;
  return num / double(den);
}

int selected_model(const AllocationSolution& s, int worker) {
  const auto& row = s.y.at(worker);
  for (size_t m = 0; m < row.size(); ++m) {
    if (row[m]) return static_cast<int>(m);
  }
  throw ValidationError("solution has no selected model for a worker");
}

std::optional<double> median_opt(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  return median(std::move(v));
}

void csv_cell(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_double(*v);
}

void csv_row(std::ostream& os, const std::string& method, int window, long seed, double objective,
             const std::optional<double>& realized, double pct, const std::optional<double>& auc,
             double wall_ms) {
  os << method << ',' << window << ',' << seed << ',' << format_double(objective) << ',';
  csv_cell(os, realized);
  os << ',' << format_double(pct) << ',';
  csv_cell(os, auc);
  os << ',' << format_double(wall_ms) << '\n';
}

}  // namespace

std::map<std::string, int> model_selection_profile(const AllocationSolution& s,
                                                   const ModelCatalog& catalog) {
  std::map<std::string, int> counts;
  for (size_t i = 0; i < catalog.candidates.size(); ++i) {
    int m = selected_model(s, static_cast<int>(i));
    counts[to_string(catalog.candidates[i].at(m).kind)] += 1;
  }
  return counts;
}

Json allocation_statistics(const AllocationSolution& s, const ModelCatalog& catalog) {
  const auto& tasks = catalog.problem.tasks;
  std::vector<double> values(tasks.size());
  for (size_t j = 0; j < tasks.size(); ++j) values[j] = tasks[j].value;
  const double v_mean = mean(values);
  const double v_std = stddev_pop(values);
  const double scale = v_std > 0.0 ? v_std : 1.0;

  std::map<std::string, std::vector<double>> scaled_by_kind;
  std::map<std::string, std::vector<double>> raw_by_kind;
  for (size_t i = 0; i < s.x.size(); ++i) {
    const int m = selected_model(s, static_cast<int>(i));
    const std::string kind = to_string(catalog.candidates.at(i).at(m).kind);
    for (size_t j = 0; j < tasks.size(); ++j) {
      if (!s.x[i][j]) continue;
      scaled_by_kind[kind].push_back((values[j] - v_mean) / scale);
      if (!catalog.agg_raw.empty()) raw_by_kind[kind].push_back(catalog.agg_raw[j]);
    }
  }

  Json out;
  for (const char* kind : {"individual", "aggregate", "profile"}) {
    auto it = scaled_by_kind.find(kind);
    if (it == scaled_by_kind.end()) continue;  // partition absent, not zero
    Json block;
    block["tasks"] = it->second.size();
    block["median_scaled_value"] = median(it->second);
    if (!catalog.agg_raw.empty()) block["median_shared_raw"] = median(raw_by_kind[kind]);
    out[kind] = std::move(block);
  }
  return out;
}

ExperimentReport run_pipeline(const Scenario& scenario, const GroundTruth* truth,
                              const RunOptions& run, const TrainingConfig& training_in) {
  if (run.methods.empty()) throw ValidationError("run: no methods requested");
  std::set<ModelKind> family_union;
  bool any_dao = false;
  for (const auto& m : run.methods) {
    auto fams = families_of(m);
    if (fams.empty()) any_dao = true;
    family_union.insert(fams.begin(), fams.end());
  }

  SplitSpec split = make_split(scenario.meta, run.train_months, run.min_test_reviews);
  TrainingConfig training = training_in;
  training.seed = mix_seed(run.seed, "training");

  // One catalog serves every method: families are seeded independently of
  // the mode, so a broad catalog contains each narrow one as a column.
  std::string catalog_mode;
  if (any_dao || family_union.size() > 1) {
    catalog_mode = "dao";
  } else if (*family_union.begin() == ModelKind::Individual) {
    catalog_mode = "uao-individual";
  } else if (*family_union.begin() == ModelKind::Aggregate) {
    catalog_mode = "uao-aggregate";
  } else {
    catalog_mode = "uao-profile";
  }
  ModelCatalog cat = build_catalog(scenario, split, catalog_mode, training);
  require_valid(cat.problem);

  ExperimentReport rep;
  rep.train_months = run.train_months;
  rep.seed = run.seed;
  rep.n_workers = cat.problem.n_workers();
  rep.n_tasks = cat.problem.n_tasks();
  rep.exclusions = cat.exclusions;
  rep.baseline_universe = catalog_mode;

  if (run.baseline_samples < 1) throw ValidationError("run: baseline_samples must be >= 1");
  rep.baseline = random_policy_value(cat.problem, run.baseline_samples, mix_seed(run.seed, "baseline"));
  if (std::abs(rep.baseline.mean) < 1e-12)
    throw ValidationError("run: random baseline mean is zero; improvements are undefined");

  // AUC table over the families the catalog holds.
  for (size_t m = 0; m < cat.candidates.at(0).size(); ++m) {
    FamilyAuc fa;
    fa.family = to_string(cat.candidates[0][m].kind);
    std::vector<int> col(cat.candidates.size(), static_cast<int>(m));
    fa.weighted_auc = weighted_auc(cat, col);
    for (const auto& worker : cat.candidates) {
      if (worker[m].test_auc) {
        fa.workers_scored += 1;
        fa.test_rows += worker[m].test_rows;
      }
    }
    rep.auc_table.push_back(std::move(fa));
  }

  rep.allocation_statistics = Json::object();
  for (const auto& method : run.methods) {
    MethodResult res;
    res.method = method;
    auto fams = families_of(method);
    const auto t0 = std::chrono::steady_clock::now();

    AllocationSolution sol;
    if (method == "dpo") {
      if (cat.agg_raw.empty()) throw ValidationError("dpo needs the shared model's predictions");
      std::vector<std::vector<uint8_t>> bhat(
          cat.problem.n_workers(), std::vector<uint8_t>(cat.problem.n_tasks(), 0));
      for (int j = 0; j < cat.problem.n_tasks(); ++j) {
        const uint8_t b = cat.agg_raw[j] >= 0.5 ? 1 : 0;
        for (int i = 0; i < cat.problem.n_workers(); ++i) bhat[i][j] = b;
      }
      sol = solve_dpo(cat.problem, bhat);
    } else if (method == "dao-exact") {
      DaoExactResult ex = solve_dao_exact(cat.problem, run.node_limit);
      sol = std::move(ex.solution);
      res.bound_gap = ex.bound_gap;
      res.nodes = ex.nodes;
    } else if (method == "dao-heuristic") {
      sol = solve_dao_heuristic(cat.problem, run.heuristic_restarts, mix_seed(run.seed, "heuristic"))
                .solution;
    } else {
      AllocationProblem sub =
          catalog_mode == "dao"
              ? restrict_to_models(cat.problem, std::vector<int>(cat.problem.n_workers(),
                                                                 candidate_column(cat, fams[0])))
              : cat.problem;
      sol = solve_uao(sub);
    }
    res.wall_ms = elapsed_ms(t0);

    res.objective = sol.objective;
    res.status = sol.status;
    res.pct_improvement = 100.0 * (sol.objective - rep.baseline.mean) / std::abs(rep.baseline.mean);
    if (truth)
      res.realized = realized_value(sol, *truth, cat.problem.tasks, cat.problem.roster.worker_ids);

    if (fams.empty()) {
      // Model selection drives which AUC each worker contributes.
      std::vector<int> col(cat.candidates.size());
      for (size_t i = 0; i < cat.candidates.size(); ++i)
        col[i] = selected_model(sol, static_cast<int>(i));
      res.auc = weighted_auc(cat, col);
      res.selection_counts = model_selection_profile(sol, cat);
      if (method == "dao-exact") rep.allocation_statistics = allocation_statistics(sol, cat);
    } else {
      std::vector<int> col(cat.candidates.size(), candidate_column(cat, fams[0]));
      res.auc = weighted_auc(cat, col);
    }
    rep.methods.push_back(std::move(res));
  }
  return rep;
}

Json report_to_json(const ExperimentReport& r) {
  Json j;
  j["train_months"] = r.train_months;
  j["seed"] = r.seed;
  j["n_workers"] = r.n_workers;
  j["n_tasks"] = r.n_tasks;
  Json base;
  base["mean"] = r.baseline.mean;
  base["std_error"] = r.baseline.std_error;
  base["n_samples"] = r.baseline.n_samples;
  base["universe"] = r.baseline_universe;
  j["random_baseline"] = std::move(base);

  Json methods = Json::array();
  for (const auto& m : r.methods) {
    Json jm;
    jm["method"] = m.method;
    jm["objective"] = m.objective;
    jm["status"] = to_string(m.status);
    jm["pct_improvement"] = m.pct_improvement;
    if (m.realized) jm["realized"] = *m.realized;
    if (m.auc) jm["auc"] = *m.auc;
    if (m.bound_gap) jm["bound_gap"] = *m.bound_gap;
    if (m.nodes) jm["nodes"] = *m.nodes;
    if (!m.selection_counts.empty()) {
      Json sel;
      for (const char* kind : {"individual", "aggregate", "profile"}) {
        auto it = m.selection_counts.find(kind);
        sel[kind] = it == m.selection_counts.end() ? 0 : it->second;
      }
      jm["selection_counts"] = std::move(sel);
    }
    methods.push_back(std::move(jm));
  }
  j["methods"] = std::move(methods);

  Json aucs = Json::array();
  for (const auto& fa : r.auc_table) {
    Json ja;
    ja["family"] = fa.family;
    if (fa.weighted_auc) ja["weighted_auc"] = *fa.weighted_auc;
    ja["workers_scored"] = fa.workers_scored;
    ja["test_rows"] = fa.test_rows;
    aucs.push_back(std::move(ja));
  }
  j["auc_table"] = std::move(aucs);
  j["allocation_statistics"] = r.allocation_statistics;
  j["exclusions"] = r.exclusions;
  return j;
}

SweepResult sweep_training_window(const ScenarioConfig& base, const TrainingConfig& training,
                                  const SweepOptions& sweep) {
  if (sweep.windows.empty()) throw ValidationError("sweep: no windows");
  if (sweep.n_seeds < 1) throw ValidationError("sweep: n_seeds must be >= 1");
  const int largest = *std::max_element(sweep.windows.begin(), sweep.windows.end());
  SplitSpec probe;
  probe.train_months = largest;
  probe.days_per_month = base.days_per_month;
  probe.horizon_months = base.n_months;
  probe.validate();  // throws when the horizon cannot hold the largest window

  SweepResult out;
  out.windows = sweep.windows;
  out.n_seeds = sweep.n_seeds;

  for (int s = 0; s < sweep.n_seeds; ++s) {
    ScenarioConfig cfg = base;
    cfg.seed = mix_seed(sweep.master_seed, "scenario:" + std::to_string(s));
    GeneratedScenario gen = generate_scenario(cfg);
    for (int window : sweep.windows) {
      RunOptions run = sweep.run;
      run.train_months = window;
      run.seed = mix_seed(sweep.master_seed, "run:" + std::to_string(s) + ":" + std::to_string(window));
      ExperimentReport rep = run_pipeline(gen.scenario, &gen.truth, run, training);
      for (const auto& m : rep.methods) {
        SweepCell cell;
        cell.window = window;
        cell.seed_index = s;
        cell.method = m.method;
        cell.objective = m.objective;
        cell.realized = m.realized;
        cell.pct_improvement = m.pct_improvement;
        cell.auc = m.auc;
        cell.wall_ms = m.wall_ms;
        if (!m.selection_counts.empty()) {
          int total = 0;
          for (const auto& kv : m.selection_counts) total += kv.second;
          auto it = m.selection_counts.find("individual");
          cell.individual_share =
              total > 0 ? double(it == m.selection_counts.end() ? 0 : it->second) / total : 0.0;
        }
        if (m.method == "dao-exact") cell.allocation_statistics = rep.allocation_statistics;
        out.cells.push_back(std::move(cell));
      }
    }
  }

  for (int window : sweep.windows) {
    for (const auto& method : sweep.run.methods) {
      SweepSummaryRow row;
      row.window = window;
      row.method = method;
      std::vector<double> obj, pct, auc, realized, share;
      for (const auto& c : out.cells) {
        if (c.window != window || c.method != method) continue;
        obj.push_back(c.objective);
        pct.push_back(c.pct_improvement);
        if (c.auc) auc.push_back(*c.auc);
        if (c.realized) realized.push_back(*c.realized);
        if (c.individual_share) share.push_back(*c.individual_share);
      }
      row.n_seeds = static_cast<int>(obj.size());
      if (row.n_seeds == 0) continue;
      row.median_objective = median(obj);
      row.median_pct_improvement = median(pct);
      row.median_auc = median_opt(std::move(auc));
      row.median_realized = median_opt(std::move(realized));
      row.median_individual_share = median_opt(std::move(share));
      out.summary.push_back(std::move(row));
    }
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "method,window,seed,objective,realized,pct_improvement,auc,wall_ms\n";
  for (const auto& c : r.cells)
    csv_row(os, c.method, c.window, c.seed_index, c.objective, c.realized, c.pct_improvement,
            c.auc, c.wall_ms);
  return os.str();
}

std::string report_to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "method,window,seed,objective,realized,pct_improvement,auc,wall_ms\n";
  for (const auto& m : r.methods)
    csv_row(os, m.method, r.train_months, static_cast<long>(r.seed), m.objective, m.realized,
            m.pct_improvement, m.auc, m.wall_ms);
  return os.str();
}

Json sweep_summary_json(const SweepResult& r) {
  Json j;
  j["windows"] = r.windows;
  j["n_seeds"] = r.n_seeds;
  Json rows = Json::array();
  for (const auto& row : r.summary) {
    Json jr;
    jr["window"] = row.window;
    jr["method"] = row.method;
    jr["n_seeds"] = row.n_seeds;
    jr["median_objective"] = row.median_objective;
    jr["median_pct_improvement"] = row.median_pct_improvement;
    if (row.median_auc) jr["median_auc"] = *row.median_auc;
    if (row.median_realized) jr["median_realized"] = *row.median_realized;
    if (row.median_individual_share) jr["median_individual_share"] = *row.median_individual_share;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace wfa
