// Command-line surface for scenario generation, model training, allocation,
// and experiment sweeps.  Exit codes: 0 success, 2 invalid input (including
// bad command lines), 3 infeasible instance, 1 unexpected failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfa/harness.hpp"
#include "wfa/util.hpp"

namespace fs = std::filesystem;
using namespace wfa;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

// Config files may be a bare scenario config or carry named sections.
ScenarioConfig scenario_section(const Json& j) {
  return scenario_config_from_json(j.contains("scenario") ? j.at("scenario") : j);
}

TrainingConfig training_section(const Json& j) {
  return j.contains("training") ? training_config_from_json(j.at("training")) : TrainingConfig{};
}

int run_generate(const std::string& config_path, const std::string& out_dir) {
  const std::string raw = read_file(config_path);
  ScenarioConfig cfg = scenario_section(parse_json(raw, "config"));
  GeneratedScenario gen = generate_scenario(cfg);
  fs::create_directories(out_dir);
  save_scenario(gen.scenario, out_dir + "/scenario.json");
  save_json(ground_truth_to_json(gen.truth), out_dir + "/ground_truth.json");
  write_file(out_dir + "/config.json", raw);
  std::cout << "wrote " << out_dir << "/scenario.json (" << gen.scenario.tasks.size()
            << " tasks, " << gen.scenario.records.size() << " records, "
            << gen.scenario.roster.n_workers() << " workers)\n";
  return 0;
}

int run_train(const std::string& scenario_dir, const std::string& mode, int window,
              int min_test_reviews, uint64_t seed, const std::string& config_path,
              std::string out_path) {
  Scenario scenario = load_scenario(scenario_dir + "/scenario.json");
  TrainingConfig training;
  if (!config_path.empty()) training = training_section(parse_json(read_file(config_path), "config"));
  training.seed = mix_seed(seed, "training");
  SplitSpec split = make_split(scenario.meta, window, min_test_reviews);
  ModelCatalog cat = build_catalog(scenario, split, mode, training);
  if (out_path.empty())
    out_path = scenario_dir + "/catalog-" + mode + "-w" + std::to_string(window) + ".json";
  save_json(catalog_to_json(cat), out_path);
  std::cout << "wrote " << out_path << " (" << cat.problem.n_workers() << " workers, "
            << cat.problem.n_tasks() << " tasks, " << cat.problem.max_models()
            << " candidate(s)/worker";
  if (!cat.exclusions.empty()) std::cout << ", " << cat.exclusions.size() << " exclusion(s)";
  std::cout << ")\n";
  return 0;
}

int run_allocate(const std::string& catalog_path, const std::string& solver, long node_limit,
                 int restarts, uint64_t seed, std::string out_path) {
  ModelCatalog cat = catalog_from_json(load_json(catalog_path));
  require_valid(cat.problem);
  const auto t0 = std::chrono::steady_clock::now();
  Json result;
  result["solver"] = solver;
  AllocationSolution sol;
  if (solver == "exact") {
    DaoExactResult ex = solve_dao_exact(cat.problem, node_limit);
    sol = std::move(ex.solution);
    result["bound_gap"] = ex.bound_gap;
    result["nodes"] = ex.nodes;
  } else {
    sol = solve_dao_heuristic(cat.problem, restarts, mix_seed(seed, "heuristic")).solution;
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  result["objective"] = sol.objective;
  result["status"] = to_string(sol.status);
  result["solution"] = solution_to_json(sol);
  if (out_path.empty()) {
    fs::path p(catalog_path);
    out_path = (p.parent_path() / (p.stem().string() + "-solution.json")).string();
  }
  save_json(result, out_path);
  std::cout << "wrote " << out_path << " (objective " << sol.objective << ", status "
            << to_string(sol.status) << ", " << wall_ms << " ms)\n";
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<int> seeds_override, const std::vector<int>& windows_override) {
  const std::string raw = read_file(config_path);
  Json j = parse_json(raw, "config");
  ScenarioConfig scenario_cfg = scenario_section(j);
  TrainingConfig training = training_section(j);

  SweepOptions sweep;
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    try {
      if (s.contains("windows")) sweep.windows = s.at("windows").get<std::vector<int>>();
      if (s.contains("n_seeds")) sweep.n_seeds = s.at("n_seeds").get<int>();
      if (s.contains("master_seed")) sweep.master_seed = s.at("master_seed").get<uint64_t>();
      if (s.contains("methods")) sweep.run.methods = s.at("methods").get<std::vector<std::string>>();
      if (s.contains("min_test_reviews"))
        sweep.run.min_test_reviews = s.at("min_test_reviews").get<int>();
      if (s.contains("baseline_samples"))
        sweep.run.baseline_samples = s.at("baseline_samples").get<long>();
      if (s.contains("node_limit")) sweep.run.node_limit = s.at("node_limit").get<long>();
      if (s.contains("heuristic_restarts"))
        sweep.run.heuristic_restarts = s.at("heuristic_restarts").get<int>();
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("sweep config: ") + e.what());
    }
  }
  if (seeds_override) sweep.n_seeds = *seeds_override;
  if (!windows_override.empty()) sweep.windows = windows_override;

  SweepResult result = sweep_training_window(scenario_cfg, training, sweep);
  fs::create_directories(out_dir);
  write_file(out_dir + "/results.csv", sweep_to_csv(result));
  save_json(sweep_summary_json(result), out_dir + "/summary.json");
  write_file(out_dir + "/config.json", raw);
  std::cout << "wrote " << out_dir << "/results.csv and " << out_dir << "/summary.json ("
            << result.cells.size() << " cells over " << result.windows.size() << " window(s) x "
            << result.n_seeds << " seed(s))\n";
  return 0;
}

int run_report(const std::string& in_dir, const std::string& format) {
  if (format == "csv") {
    std::cout << read_file(in_dir + "/results.csv");
  } else {
    std::cout << read_file(in_dir + "/summary.json");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workforce allocation toolkit"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* gen = app.add_subcommand("generate", "generate a synthetic scenario");
  {
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    gen->add_option("--config", *config, "scenario config JSON")->required();
    gen->add_option("--out", *out, "output directory")->required();
    gen->callback([=, &action] { action = [=] { return run_generate(*config, *out); }; });
  }

  auto* train = app.add_subcommand("train", "build a model catalog from a scenario");
  {
    auto dir = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("dao");
    auto window = std::make_shared<int>(12);
    auto min_reviews = std::make_shared<int>(50);
    auto seed = std::make_shared<uint64_t>(1);
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    train->add_option("--scenario", *dir, "directory holding scenario.json")->required();
    train->add_option("--mode", *mode, "uao-individual|uao-aggregate|uao-profile|dao")
        ->check(CLI::IsMember({"uao-individual", "uao-aggregate", "uao-profile", "dao"}));
    train->add_option("--window", *window, "training window in months")->required();
    train->add_option("--min-test-reviews", *min_reviews, "test-row floor per worker");
    train->add_option("--seed", *seed, "training seed");
    train->add_option("--config", *config, "config JSON with a training section");
    train->add_option("--out", *out, "catalog output path");
    train->callback([=, &action] {
      action = [=] { return run_train(*dir, *mode, *window, *min_reviews, *seed, *config, *out); };
    });
  }

  auto* alloc = app.add_subcommand("allocate", "solve the allocation in a catalog");
  {
    auto catalog = std::make_shared<std::string>();
    auto solver = std::make_shared<std::string>("exact");
    auto node_limit = std::make_shared<long>(200000);
    auto restarts = std::make_shared<int>(8);
    auto seed = std::make_shared<uint64_t>(1);
    auto out = std::make_shared<std::string>();
    alloc->add_option("--catalog", *catalog, "catalog JSON from `train`")->required();
    alloc->add_option("--solver", *solver, "exact|heuristic")
        ->check(CLI::IsMember({"exact", "heuristic"}));
    alloc->add_option("--node-limit", *node_limit, "search node budget (exact)");
    alloc->add_option("--restarts", *restarts, "random starts (heuristic)");
    alloc->add_option("--seed", *seed, "heuristic seed");
    alloc->add_option("--out", *out, "solution output path");
    alloc->callback([=, &action] {
      action = [=] {
        return run_allocate(*catalog, *solver, *node_limit, *restarts, *seed, *out);
      };
    });
  }

  auto* sweep = app.add_subcommand("sweep", "run the training-window experiment grid");
  {
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto seeds = std::make_shared<int>(-1);
    auto windows = std::make_shared<std::vector<int>>();
    sweep->add_option("--config", *config, "combined config JSON")->required();
    sweep->add_option("--out", *out, "output directory")->required();
    sweep->add_option("--seeds", *seeds, "override the seed count");
    sweep->add_option("--windows", *windows, "override the window list (months)");
    sweep->callback([=, &action] {
      action = [=] {
        std::optional<int> so;
        if (*seeds > 0) so = *seeds;
        return run_sweep(*config, *out, so, *windows);
      };
    });
  }

  auto* report = app.add_subcommand("report", "print stored sweep results");
  {
    auto dir = std::make_shared<std::string>();
    auto format = std::make_shared<std::string>("json");
    report->add_option("--in", *dir, "sweep output directory")->required();
    report->add_option("--format", *format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    report->callback([=, &action] { action = [=] { return run_report(*dir, *format); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
