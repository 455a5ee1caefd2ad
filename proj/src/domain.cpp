#include "wfa/domain.hpp"

#include <cmath>
#include <sstream>

namespace wfa {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::ExactOptimal: return "exact-optimal";
    case SolverStatus::Heuristic: return "heuristic";
    case SolverStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

SolverStatus solver_status_from_string(const std::string& s) {
  if (s == "exact-optimal") return SolverStatus::ExactOptimal;
  if (s == "heuristic") return SolverStatus::Heuristic;
  if (s == "infeasible") return SolverStatus::Infeasible;
  throw ValidationError("unknown solver status: " + s);
}

std::string describe(const std::vector<Violation>& vs) {
  std::ostringstream out;
  for (size_t k = 0; k < vs.size(); ++k) {
    if (k) out << "; ";
    out << vs[k].code << "(";
    for (size_t w = 0; w < vs[k].where.size(); ++w) {
      if (w) out << ",";
      out << vs[k].where[w];
    }
    out << ")";
    if (!vs[k].detail.empty()) out << " " << vs[k].detail;
  }
  return out.str();
}

std::vector<std::vector<int>> tasks_by_day(const AllocationProblem& p) {
  std::vector<std::vector<int>> by_day(std::max(0, p.roster.n_days()));
  for (int j = 0; j < p.n_tasks(); ++j) {
    int t = p.tasks[j].day;
    if (t >= 0 && t < static_cast<int>(by_day.size())) by_day[t].push_back(j);
  }
  return by_day;
}

std::vector<Violation> validate_problem(const AllocationProblem& p) {
  std::vector<Violation> out;
  const int I = p.n_workers();
  const int J = p.n_tasks();
  const int T = p.roster.n_days();
  const int M = p.expectation.dim2();

  if (static_cast<int>(p.roster.capacity.size()) != I) {
    out.push_back({"dimension-mismatch", {}, "capacity rows != workers"});
    return out;  // shapes are broken; nothing below is safe to index
  }
  for (int i = 0; i < I; ++i) {
    if (static_cast<int>(p.roster.capacity[i].size()) != T) {
      out.push_back({"dimension-mismatch", {i}, "ragged capacity matrix"});
      return out;
    }
  }
  if (p.expectation.dim0() != I || p.expectation.dim1() != J) {
    out.push_back({"dimension-mismatch", {}, "expectation tensor does not match workers x tasks"});
    return out;
  }
  if (static_cast<int>(p.candidate_counts.size()) != I) {
    out.push_back({"dimension-mismatch", {}, "candidate_counts size != workers"});
    return out;
  }

  for (int i = 0; i < I; ++i) {
    if (p.candidate_counts[i] < 1 || p.candidate_counts[i] > M) {
      out.push_back({"candidate-count", {i}, "|M(i)| outside [1, tensor depth]"});
    }
    for (int t = 0; t < T; ++t) {
      if (p.roster.capacity[i][t] < 0) {
        out.push_back({"negative-capacity", {i, t}, ""});
      }
    }
  }

  for (int j = 0; j < J; ++j) {
    if (p.tasks[j].day < 0 || p.tasks[j].day >= T) {
      out.push_back({"day-range", {j}, "task day outside planning horizon"});
    }
    if (!std::isfinite(p.tasks[j].value)) {
      out.push_back({"value-not-finite", {j}, ""});
    }
  }

  for (int i = 0; i < I; ++i) {
    const int mi = std::min(p.candidate_counts[i], M);
    for (int j = 0; j < J; ++j) {
      for (int m = 0; m < mi; ++m) {
        double v = p.expectation.at(i, j, m);
        if (!(v >= 0.0 && v <= 1.0)) {
          out.push_back({"probability-range", {i, j, m}, ""});
        }
      }
    }
  }

  // Capacity must cover demand day by day; every task has to be assigned.
  std::vector<int> demand(T, 0);
  for (int j = 0; j < J; ++j) {
    if (p.tasks[j].day >= 0 && p.tasks[j].day < T) demand[p.tasks[j].day]++;
  }
  for (int t = 0; t < T; ++t) {
    long cap = 0;
    for (int i = 0; i < I; ++i) cap += std::max(0, p.roster.capacity[i][t]);
    if (cap < demand[t]) {
      out.push_back({"capacity-shortfall", {t},
                     "day demand " + std::to_string(demand[t]) + " > capacity " + std::to_string(cap)});
    }
  }
  return out;
}

namespace {

bool binary01(uint8_t v) { return v == 0 || v == 1; }

}  // namespace

std::vector<Violation> check_solution(const AllocationProblem& p, const AllocationSolution& s) {
  std::vector<Violation> out;
  const int I = p.n_workers();
  const int J = p.n_tasks();
  const int M = p.expectation.dim2();

  auto shape_bad = [&]() {
    if (static_cast<int>(s.x.size()) != I || static_cast<int>(s.y.size()) != I ||
        static_cast<int>(s.z.size()) != I)
      return true;
    for (int i = 0; i < I; ++i) {
      if (static_cast<int>(s.x[i].size()) != J || static_cast<int>(s.y[i].size()) != M ||
          static_cast<int>(s.z[i].size()) != J)
        return true;
      for (int j = 0; j < J; ++j) {
        if (static_cast<int>(s.z[i][j].size()) != M) return true;
      }
    }
    return false;
  };
  if (shape_bad()) {
    out.push_back({"dimension-mismatch", {}, "solution tensors do not match problem shape"});
    return out;
  }

  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      if (!binary01(s.x[i][j])) out.push_back({"not-binary", {i, j}, "x"});
      for (int m = 0; m < M; ++m) {
        if (!binary01(s.z[i][j][m])) out.push_back({"not-binary", {i, j, m}, "z"});
      }
    }
    for (int m = 0; m < M; ++m) {
      if (!binary01(s.y[i][m])) out.push_back({"not-binary", {i, m}, "y"});
    }
  }

  // Every task is covered exactly once.
  for (int j = 0; j < J; ++j) {
    int c = 0;
    for (int i = 0; i < I; ++i) c += s.x[i][j];
    if (c != 1) out.push_back({"coverage", {j}, "task assigned " + std::to_string(c) + " times"});
  }

  // Daily capacity.
  const int T = p.roster.n_days();
  for (int i = 0; i < I; ++i) {
    std::vector<int> load(T, 0);
    for (int j = 0; j < J; ++j) {
      if (s.x[i][j] && p.tasks[j].day >= 0 && p.tasks[j].day < T) load[p.tasks[j].day]++;
    }
    for (int t = 0; t < T; ++t) {
      if (load[t] > p.roster.capacity[i][t]) {
        out.push_back({"capacity", {i, t},
                       "load " + std::to_string(load[t]) + " > " + std::to_string(p.roster.capacity[i][t])});
      }
    }
  }

  // Exactly one model per worker, chosen among its first |M(i)| candidates.
  for (int i = 0; i < I; ++i) {
    int c = 0;
    for (int m = 0; m < M; ++m) {
      c += s.y[i][m];
      if (s.y[i][m] && m >= p.candidate_counts[i]) {
        out.push_back({"model-out-of-range", {i, m}, ""});
      }
    }
    if (c != 1) out.push_back({"model-choice", {i}, "sum_m y = " + std::to_string(c)});
  }

  // Linking: sum_m z = x, z <= y.
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      int zsum = 0;
      for (int m = 0; m < M; ++m) {
        zsum += s.z[i][j][m];
        if (s.z[i][j][m] > s.y[i][m]) out.push_back({"z-exceeds-y", {i, j, m}, ""});
      }
      if (zsum != s.x[i][j]) out.push_back({"z-link", {i, j}, "sum_m z != x"});
    }
  }

  // Stored objective must agree with (P, v, z).
  double obj = 0.0;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      for (int m = 0; m < M; ++m) {
        if (s.z[i][j][m]) obj += p.expectation.at(i, j, m) * p.tasks[j].value;
      }
    }
  }
  if (std::abs(obj - s.objective) > kTol) {
    out.push_back({"objective-mismatch", {}, "stored objective differs from recomputation"});
  }
  return out;
}

double evaluate_solution(const AllocationProblem& p, const AllocationSolution& s) {
  std::vector<Violation> vs = check_solution(p, s);
  // Drop the stored-objective check: evaluate_solution is what computes it.
  std::erase_if(vs, [](const Violation& v) { return v.code == "objective-mismatch"; });
  if (!vs.empty()) {
    throw ValidationError("structural-violation: " + describe(vs));
  }
  double obj = 0.0;
  for (int i = 0; i < p.n_workers(); ++i) {
    for (int j = 0; j < p.n_tasks(); ++j) {
      for (int m = 0; m < p.expectation.dim2(); ++m) {
        if (s.z[i][j][m]) obj += p.expectation.at(i, j, m) * p.tasks[j].value;
      }
    }
  }
  return obj;
}

void finalize_solution(const AllocationProblem& p, AllocationSolution& s) {
  const int I = p.n_workers();
  const int J = p.n_tasks();
  const int M = p.expectation.dim2();
  s.z.assign(I, std::vector<std::vector<uint8_t>>(J, std::vector<uint8_t>(M, 0)));
  double obj = 0.0;
  for (int i = 0; i < I; ++i) {
    int mi = -1;
    for (int m = 0; m < M; ++m) {
      if (s.y[i][m]) {
        mi = m;
        break;
      }
    }
    if (mi < 0) continue;
    for (int j = 0; j < J; ++j) {
      if (s.x[i][j]) {
        s.z[i][j][mi] = 1;
        obj += p.expectation.at(i, j, mi) * p.tasks[j].value;
      }
    }
  }
  s.objective = obj;
}

}  // namespace wfa
