#include "wfa/io.hpp"

#include <fstream>

namespace wfa {

namespace {

Json task_to_json(const TaskInstance& t) {
  Json j;
  j["id"] = t.id;
  j["day"] = t.day;
  j["features"] = t.features;
  j["value"] = t.value;
  return j;
}

TaskInstance task_from_json(const Json& j) {
  TaskInstance t;
  if (!j.contains("id") || !j.contains("day") || !j.contains("features") || !j.contains("value")) {
    throw ValidationError("task missing one of: id, day, features, value");
  }
  t.id = j.at("id").get<std::string>();
  t.day = j.at("day").get<int>();
  t.features = j.at("features").get<std::vector<double>>();
  t.value = j.at("value").get<double>();
  return t;
}

}  // namespace

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["meta"] = {{"feature_dim", s.meta.feature_dim},
               {"days_per_month", s.meta.days_per_month},
               {"n_months", s.meta.n_months},
               {"opt_start_day", s.meta.opt_start_day},
               {"seed", s.meta.seed}};
  Json roster;
  roster["worker_ids"] = s.roster.worker_ids;
  roster["capacity"] = s.roster.capacity;
  j["roster"] = roster;
  Json tasks = Json::array();
  for (const auto& t : s.tasks) tasks.push_back(task_to_json(t));
  j["tasks"] = tasks;
  Json records = Json::array();
  for (const auto& r : s.records) {
    Json rec;
    rec["worker_id"] = r.worker_id;
    rec["task"] = task_to_json(r.task);
    rec["decision"] = r.decision;
    records.push_back(rec);
  }
  j["records"] = records;
  return j;
}

Scenario scenario_from_json(const Json& j) {
  Scenario s;
  try {
    if (!j.contains("roster") || !j.contains("tasks") || !j.contains("records")) {
      throw ValidationError("scenario missing one of: roster, tasks, records");
    }
    if (j.contains("meta")) {
      const Json& m = j.at("meta");
      s.meta.feature_dim = m.value("feature_dim", 0);
      s.meta.days_per_month = m.value("days_per_month", 0);
      s.meta.n_months = m.value("n_months", 0);
      s.meta.opt_start_day = m.value("opt_start_day", 0);
      s.meta.seed = m.value("seed", uint64_t{0});
    }
    s.roster.worker_ids = j.at("roster").at("worker_ids").get<std::vector<std::string>>();
    s.roster.capacity = j.at("roster").at("capacity").get<std::vector<std::vector<int>>>();
    for (const auto& t : j.at("tasks")) s.tasks.push_back(task_from_json(t));
    for (const auto& r : j.at("records")) {
      DecisionRecord rec;
      if (!r.contains("worker_id") || !r.contains("task") || !r.contains("decision")) {
        throw ValidationError("record missing one of: worker_id, task, decision");
      }
      rec.worker_id = r.at("worker_id").get<std::string>();
      rec.task = task_from_json(r.at("task"));
      rec.decision = r.at("decision").get<int>();
      if (rec.decision != 0 && rec.decision != 1) {
        throw ValidationError("record decision must be 0 or 1");
      }
      s.records.push_back(std::move(rec));
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  }

  if (static_cast<int>(s.roster.capacity.size()) != s.roster.n_workers()) {
    throw ValidationError("roster capacity rows != worker_ids size");
  }
  size_t dim = s.meta.feature_dim > 0 ? size_t(s.meta.feature_dim)
                                      : (s.tasks.empty() ? 0 : s.tasks[0].features.size());
  for (const auto& t : s.tasks) {
    if (t.features.size() != dim) throw ValidationError("inconsistent feature dimension in tasks");
  }
  for (const auto& r : s.records) {
    if (r.task.features.size() != dim) throw ValidationError("inconsistent feature dimension in records");
  }
  return s;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(load_json(path)); }

void save_scenario(const Scenario& s, const std::string& path) {
  save_json(scenario_to_json(s), path);
}

Json solution_to_json(const AllocationSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  j["objective"] = s.objective;
  Json xs = Json::array(), ys = Json::array(), zs = Json::array();
  for (size_t i = 0; i < s.x.size(); ++i) {
    for (size_t j2 = 0; j2 < s.x[i].size(); ++j2) {
      if (s.x[i][j2]) xs.push_back({int(i), int(j2)});
    }
  }
  for (size_t i = 0; i < s.y.size(); ++i) {
    for (size_t m = 0; m < s.y[i].size(); ++m) {
      if (s.y[i][m]) ys.push_back({int(i), int(m)});
    }
  }
  for (size_t i = 0; i < s.z.size(); ++i) {
    for (size_t j2 = 0; j2 < s.z[i].size(); ++j2) {
      for (size_t m = 0; m < s.z[i][j2].size(); ++m) {
        if (s.z[i][j2][m]) zs.push_back({int(i), int(j2), int(m)});
      }
    }
  }
  j["x"] = xs;
  j["y"] = ys;
  j["z"] = zs;
  return j;
}

AllocationSolution solution_from_json(const Json& j, int n_workers, int n_tasks, int max_models) {
  AllocationSolution s;
  try {
    s.status = solver_status_from_string(j.at("status").get<std::string>());
    s.objective = j.at("objective").get<double>();
    s.x.assign(n_workers, std::vector<uint8_t>(n_tasks, 0));
    s.y.assign(n_workers, std::vector<uint8_t>(max_models, 0));
    s.z.assign(n_workers,
               std::vector<std::vector<uint8_t>>(n_tasks, std::vector<uint8_t>(max_models, 0)));
    for (const auto& e : j.at("x")) s.x.at(e.at(0).get<int>()).at(e.at(1).get<int>()) = 1;
    for (const auto& e : j.at("y")) s.y.at(e.at(0).get<int>()).at(e.at(1).get<int>()) = 1;
    for (const auto& e : j.at("z"))
      s.z.at(e.at(0).get<int>()).at(e.at(1).get<int>()).at(e.at(2).get<int>()) = 1;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed solution: ") + e.what());
  } catch (const std::out_of_range&) {
    throw ValidationError("solution index outside problem dimensions");
  }
  return s;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

void save_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace wfa
