#include "wfa/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include "wfa/util.hpp"

namespace wfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Min-cost flow on a small residual graph; Dijkstra with Johnson potentials.
struct FlowGraph {
  struct Edge {
    int to;
    int cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Edge>> adj;

  explicit FlowGraph(int n) : adj(n) {}

  void add_edge(int u, int v, int cap, double cost) {
    adj[u].push_back({v, cap, cost, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, 0, -cost, static_cast<int>(adj[u].size()) - 1});
  }
};

}  // namespace

void require_valid(const AllocationProblem& p) {
  std::vector<Violation> vs = validate_problem(p);
  if (vs.empty()) return;
  for (const auto& v : vs) {
    if (v.code == "capacity-shortfall") {
      throw InfeasibleError("infeasible: " + describe(vs));
    }
  }
  throw ValidationError("invalid problem: " + describe(vs));
}

TransportationResult solve_transportation(const TransportationInstance& inst) {
  const int nw = static_cast<int>(inst.capacity.size());
  const int nt = static_cast<int>(inst.task_ids.size());
  TransportationResult res;
  res.assigned_worker.assign(nt, -1);
  if (nt == 0) return res;
  if (static_cast<int>(inst.reward.size()) != nw) {
    throw ValidationError("transportation: reward rows != workers");
  }
  long total_cap = 0;
  for (int c : inst.capacity) total_cap += std::max(0, c);
  if (total_cap < nt) {
    throw InfeasibleError("transportation: capacity " + std::to_string(total_cap) +
                          " short of " + std::to_string(nt) + " tasks");
  }

  // Nodes: 0 source, 1..nw workers, nw+1..nw+nt tasks, nw+nt+1 sink.
  const int src = 0, snk = nw + nt + 1, n_nodes = nw + nt + 2;
  FlowGraph g(n_nodes);
  for (int i = 0; i < nw; ++i) {
    if (inst.capacity[i] > 0) g.add_edge(src, 1 + i, inst.capacity[i], 0.0);
  }
  for (int i = 0; i < nw; ++i) {
    if (static_cast<int>(inst.reward[i].size()) != nt) {
      throw ValidationError("transportation: ragged reward matrix");
    }
    if (inst.capacity[i] <= 0) continue;  // the worker can take nothing today
    for (int k = 0; k < nt; ++k) g.add_edge(1 + i, 1 + nw + k, 1, -inst.reward[i][k]);
  }
  for (int k = 0; k < nt; ++k) g.add_edge(1 + nw + k, snk, 1, 0.0);

  // Initial potentials for the layered graph (costs on worker->task edges can
  // be negative before any flow exists).
  std::vector<double> pot(n_nodes, 0.0);
  for (int k = 0; k < nt; ++k) {
    double best = kInf;
    for (int i = 0; i < nw; ++i) {
      if (inst.capacity[i] > 0) best = std::min(best, -inst.reward[i][k]);
    }
    pot[1 + nw + k] = best;
  }
  double sink_pot = kInf;
  for (int k = 0; k < nt; ++k) sink_pot = std::min(sink_pot, pot[1 + nw + k]);
  pot[snk] = sink_pot;

  std::vector<double> dist(n_nodes);
  std::vector<int> prev_node(n_nodes), prev_edge(n_nodes);

  for (int augment = 0; augment < nt; ++augment) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (size_t e = 0; e < g.adj[u].size(); ++e) {
        const auto& edge = g.adj[u][e];
        if (edge.cap <= 0) continue;
        const double nd = d + edge.cost + pot[u] - pot[edge.to];
        if (nd < dist[edge.to] - 1e-15) {
          dist[edge.to] = nd;
          prev_node[edge.to] = u;
          prev_edge[edge.to] = static_cast<int>(e);
          heap.push({nd, edge.to});
        }
      }
    }
    if (dist[snk] == kInf) {
      throw InfeasibleError("transportation: cannot route all tasks");
    }
    for (int v = 0; v < n_nodes; ++v) {
      pot[v] += dist[v] == kInf ? dist[snk] : dist[v];
    }
    for (int v = snk; v != src; v = prev_node[v]) {
      auto& e = g.adj[prev_node[v]][prev_edge[v]];
      e.cap -= 1;
      g.adj[v][e.rev].cap += 1;
    }
  }

  double reward = 0.0;
  for (int i = 0; i < nw; ++i) {
    for (const auto& e : g.adj[1 + i]) {
      if (e.to > nw && e.to < 1 + nw + nt && e.cap == 0) {
        // forward worker->task edge fully used
        const int k = e.to - 1 - nw;
        // distinguish saturated forward edges from reverse edges by cost sign
        // convention: forward edges were added with cap 1.
        if (g.adj[e.to][e.rev].cap == 1) {
          res.assigned_worker[k] = i;
          reward += inst.reward[i][k];
        }
      }
    }
  }
  res.objective = reward;
  return res;
}

namespace {

// Solves each day's assignment for a dense reward matrix over all tasks.
double assign_by_day(const AllocationProblem& p, const std::vector<std::vector<double>>& reward,
                     std::vector<std::vector<uint8_t>>* x_out) {
  const int I = p.n_workers();
  if (x_out) x_out->assign(I, std::vector<uint8_t>(p.n_tasks(), 0));
  double total = 0.0;
  for (const auto& day_tasks : tasks_by_day(p)) {
    if (day_tasks.empty()) continue;
    const int t = p.tasks[day_tasks[0]].day;
    TransportationInstance inst;
    inst.task_ids = day_tasks;
    inst.capacity.resize(I);
    for (int i = 0; i < I; ++i) inst.capacity[i] = p.roster.capacity[i][t];
    inst.reward.assign(I, std::vector<double>(day_tasks.size()));
    for (int i = 0; i < I; ++i) {
      for (size_t k = 0; k < day_tasks.size(); ++k) inst.reward[i][k] = reward[i][day_tasks[k]];
    }
    TransportationResult r = solve_transportation(inst);
    total += r.objective;
    if (x_out) {
      for (size_t k = 0; k < day_tasks.size(); ++k) {
        (*x_out)[r.assigned_worker[k]][day_tasks[k]] = 1;
      }
    }
  }
  return total;
}

std::vector<std::vector<double>> rewards_for_fixed_y(const AllocationProblem& p,
                                                     const std::vector<int>& y_model) {
  const int I = p.n_workers();
  const int J = p.n_tasks();
  std::vector<std::vector<double>> r(I, std::vector<double>(J));
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      r[i][j] = p.expectation.at(i, j, y_model[i]) * p.tasks[j].value;
    }
  }
  return r;
}

// Relaxed rewards: free workers (-1) take the best candidate per task.
// argmax_m, when given, records the lowest maximizing model per (i, j).
std::vector<std::vector<double>> rewards_relaxed(const AllocationProblem& p,
                                                 const std::vector<int>& fixed_model,
                                                 std::vector<std::vector<int>>* argmax_m) {
  const int I = p.n_workers();
  const int J = p.n_tasks();
  std::vector<std::vector<double>> r(I, std::vector<double>(J));
  if (argmax_m) argmax_m->assign(I, std::vector<int>(J, 0));
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const double v = p.tasks[j].value;
      if (fixed_model[i] >= 0) {
        r[i][j] = p.expectation.at(i, j, fixed_model[i]) * v;
        if (argmax_m) (*argmax_m)[i][j] = fixed_model[i];
      } else {
        double best = p.expectation.at(i, j, 0) * v;
        int best_m = 0;
        for (int m = 1; m < p.candidate_counts[i]; ++m) {
          const double cand = p.expectation.at(i, j, m) * v;
          if (cand > best) {
            best = cand;
            best_m = m;
          }
        }
        r[i][j] = best;
        if (argmax_m) (*argmax_m)[i][j] = best_m;
      }
    }
  }
  return r;
}

AllocationSolution build_solution(const AllocationProblem& p, const std::vector<int>& y_model,
                                  SolverStatus status) {
  AllocationSolution s;
  const int I = p.n_workers();
  const int M = p.expectation.dim2();
  std::vector<std::vector<double>> reward = rewards_for_fixed_y(p, y_model);
  assign_by_day(p, reward, &s.x);
  s.y.assign(I, std::vector<uint8_t>(M, 0));
  for (int i = 0; i < I; ++i) s.y[i][y_model[i]] = 1;
  finalize_solution(p, s);
  s.status = status;
  return s;
}

}  // namespace

AllocationSolution solve_uao(const AllocationProblem& p) {
  require_valid(p);
  for (int c : p.candidate_counts) {
    if (c != 1) throw ValidationError("solve_uao requires exactly one candidate per worker");
  }
  return build_solution(p, std::vector<int>(p.n_workers(), 0), SolverStatus::ExactOptimal);
}

AllocationProblem restrict_to_models(const AllocationProblem& p, const std::vector<int>& m_of) {
  AllocationProblem out;
  out.roster = p.roster;
  out.tasks = p.tasks;
  out.expectation = Tensor3(p.n_workers(), p.n_tasks(), 1);
  out.candidate_counts.assign(p.n_workers(), 1);
  for (int i = 0; i < p.n_workers(); ++i) {
    const int m = m_of[i];
    if (m < 0 || m >= p.candidate_counts[i]) {
      throw ValidationError("restrict_to_models: model index outside M(i)");
    }
    for (int j = 0; j < p.n_tasks(); ++j) out.expectation.at(i, j, 0) = p.expectation.at(i, j, m);
  }
  return out;
}

AllocationProblem dpo_problem(const AllocationProblem& p,
                              const std::vector<std::vector<uint8_t>>& bhat) {
  AllocationProblem out;
  out.roster = p.roster;
  out.tasks = p.tasks;
  out.expectation = Tensor3(p.n_workers(), p.n_tasks(), 1);
  out.candidate_counts.assign(p.n_workers(), 1);
  if (static_cast<int>(bhat.size()) != p.n_workers()) {
    throw ValidationError("dpo: bhat rows != workers");
  }
  for (int i = 0; i < p.n_workers(); ++i) {
    if (static_cast<int>(bhat[i].size()) != p.n_tasks()) {
      throw ValidationError("dpo: bhat columns != tasks");
    }
    for (int j = 0; j < p.n_tasks(); ++j) out.expectation.at(i, j, 0) = double(bhat[i][j]);
  }
  return out;
}

AllocationSolution solve_dpo(const AllocationProblem& p,
                             const std::vector<std::vector<uint8_t>>& bhat) {
  return solve_uao(dpo_problem(p, bhat));
}

double dao_upper_bound(const AllocationProblem& p, const std::vector<int>& fixed_model) {
  require_valid(p);
  if (static_cast<int>(fixed_model.size()) != p.n_workers()) {
    throw ValidationError("dao_upper_bound: fixing size != workers");
  }
  return assign_by_day(p, rewards_relaxed(p, fixed_model, nullptr), nullptr);
}

DaoHeuristicResult solve_dao_heuristic(const AllocationProblem& p, int restarts, uint64_t seed) {
  require_valid(p);
  const int I = p.n_workers();
  const int M = p.expectation.dim2();

  // Random starts plus one deterministic start per candidate column; the
  // column starts make the final answer at least as good as the best
  // single-model policy.
  std::vector<std::vector<int>> starts;
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(mix_seed(seed, uint64_t(r)));
    std::vector<int> y(I);
    for (int i = 0; i < I; ++i) {
      std::uniform_int_distribution<int> pick(0, p.candidate_counts[i] - 1);
      y[i] = pick(rng);
    }
    starts.push_back(std::move(y));
  }
  for (int m = 0; m < M; ++m) {
    std::vector<int> y(I);
    for (int i = 0; i < I; ++i) y[i] = std::min(m, p.candidate_counts[i] - 1);
    starts.push_back(std::move(y));
  }

  DaoHeuristicResult out;
  std::vector<int> best_y;
  double best_obj = -kInf;

  for (const auto& start : starts) {
    std::vector<int> y = start;
    double obj = assign_by_day(p, rewards_for_fixed_y(p, y), nullptr);
    std::vector<double> trace{obj};

    for (int pass = 0; pass < 1000; ++pass) {
      bool moved = false;
      for (int i = 0; i < I; ++i) {
        int cur = y[i];
        int best_m = cur;
        double best_here = obj;
        for (int m = 0; m < p.candidate_counts[i]; ++m) {
          if (m == cur) continue;
          y[i] = m;
          const double cand = assign_by_day(p, rewards_for_fixed_y(p, y), nullptr);
          if (cand > best_here + kTol) {
            best_here = cand;
            best_m = m;
          }
        }
        y[i] = best_m;
        if (best_m != cur) {
          obj = best_here;
          trace.push_back(obj);
          moved = true;
        }
      }
      if (!moved) break;
    }

    if (obj > best_obj) {
      best_obj = obj;
      best_y = y;
    }
    out.traces.push_back(std::move(trace));
  }

  out.solution = build_solution(p, best_y, SolverStatus::Heuristic);
  return out;
}

DaoExactResult solve_dao_exact(const AllocationProblem& p, long node_limit) {
  require_valid(p);
  const int I = p.n_workers();

  DaoExactResult res;

  // Incumbent from the coordinate-descent heuristic (fixed internal seeding;
  // the exact solver takes no seed and stays deterministic).
  DaoHeuristicResult warm = solve_dao_heuristic(p, 2, 0x5eed0451ULL);
  std::vector<int> best_y(I);
  for (int i = 0; i < I; ++i) {
    for (int m = 0; m < p.expectation.dim2(); ++m) {
      if (warm.solution.y[i][m]) best_y[i] = m;
    }
  }
  double incumbent = warm.solution.objective;

  struct Node {
    int parent;
    int worker;
    int model;
    double bound;  // inherited upper bound (parent's true bound)
  };
  std::vector<Node> nodes;
  nodes.push_back({-1, -1, -1, kInf});

  struct HeapItem {
    double bound;
    size_t id;
    bool operator<(const HeapItem& o) const {
      if (bound != o.bound) return bound < o.bound;  // max-heap on bound
      return id > o.id;                              // then FIFO
    }
  };
  std::priority_queue<HeapItem> heap;
  heap.push({kInf, 0});

  std::vector<int> fixed(I);
  long expanded = 0;
  double remaining_bound = -kInf;

  while (!heap.empty()) {
    const HeapItem item = heap.top();
    heap.pop();
    if (item.bound <= incumbent + kTol) continue;  // stale or dominated

    if (expanded >= node_limit) {
      remaining_bound = std::max(remaining_bound, item.bound);
      continue;  // drain: track the best bound we abandoned
    }
    expanded++;

    std::fill(fixed.begin(), fixed.end(), -1);
    for (int at = static_cast<int>(item.id); at > 0; at = nodes[at].parent) {
      fixed[nodes[at].worker] = nodes[at].model;
    }

    std::vector<std::vector<int>> argmax;
    std::vector<std::vector<uint8_t>> x_relax;
    const std::vector<std::vector<double>> reward = rewards_relaxed(p, fixed, &argmax);
    const double bound = assign_by_day(p, reward, &x_relax);
    if (bound <= incumbent + kTol) continue;

    // Which models does the relaxation actually use per free worker?
    int branch_worker = -1;
    size_t branch_mix = 1;
    std::vector<int> single_model(I, -1);
    for (int i = 0; i < I; ++i) {
      if (fixed[i] >= 0) {
        single_model[i] = fixed[i];
        continue;
      }
      std::vector<int> used;
      for (int j = 0; j < p.n_tasks(); ++j) {
        if (x_relax[i][j]) {
          const int m = argmax[i][j];
          if (std::find(used.begin(), used.end(), m) == used.end()) used.push_back(m);
        }
      }
      if (used.size() <= 1) {
        single_model[i] = used.empty() ? 0 : used[0];
      } else if (used.size() > branch_mix) {
        branch_mix = used.size();
        branch_worker = i;
      }
    }

    if (branch_worker < 0) {
      // The relaxation already uses one model per worker: it is feasible and
      // attains the bound, so it closes this node.
      if (bound > incumbent) {
        incumbent = bound;
        best_y = single_model;
      }
      continue;
    }

    for (int m = 0; m < p.candidate_counts[branch_worker]; ++m) {
      nodes.push_back({static_cast<int>(item.id), branch_worker, m, bound});
      heap.push({bound, nodes.size() - 1});
    }
  }

  res.solution = build_solution(p, best_y, expanded >= node_limit && remaining_bound > -kInf
                                               ? SolverStatus::Heuristic
                                               : SolverStatus::ExactOptimal);
  res.nodes = expanded;
  res.bound_gap = res.solution.status == SolverStatus::ExactOptimal
                      ? 0.0
                      : std::max(0.0, remaining_bound - res.solution.objective);
  return res;
}

RandomPolicyStats random_policy_value(const AllocationProblem& p, long n_samples, uint64_t seed) {
  require_valid(p);
  if (n_samples < 1) throw ValidationError("random_policy_value: n_samples must be >= 1");
  const int I = p.n_workers();
  std::mt19937_64 rng(seed);
  const std::vector<std::vector<int>> by_day = tasks_by_day(p);

  double sum = 0.0, sumsq = 0.0;
  std::vector<int> order;
  std::vector<int> cap(I);
  std::vector<int> avail;

  for (long s = 0; s < n_samples; ++s) {
    std::vector<int> y(I);
    for (int i = 0; i < I; ++i) {
      std::uniform_int_distribution<int> pick(0, p.candidate_counts[i] - 1);
      y[i] = pick(rng);
    }
    double obj = 0.0;
    for (const auto& day_tasks : by_day) {
      if (day_tasks.empty()) continue;
      const int t = p.tasks[day_tasks[0]].day;
      for (int i = 0; i < I; ++i) cap[i] = p.roster.capacity[i][t];
      order = day_tasks;
      std::shuffle(order.begin(), order.end(), rng);
      for (int j : order) {
        avail.clear();
        for (int i = 0; i < I; ++i) {
          if (cap[i] > 0) avail.push_back(i);
        }
        std::uniform_int_distribution<int> pick(0, static_cast<int>(avail.size()) - 1);
        const int i = avail[pick(rng)];
        cap[i]--;
        obj += p.expectation.at(i, j, y[i]) * p.tasks[j].value;
      }
    }
    sum += obj;
    sumsq += obj * obj;
  }

  RandomPolicyStats stats;
  stats.n_samples = n_samples;
  stats.mean = sum / double(n_samples);
  if (n_samples > 1) {
    const double var = std::max(0.0, (sumsq - double(n_samples) * stats.mean * stats.mean) /
                                         double(n_samples - 1));
    stats.std_error = std::sqrt(var / double(n_samples));
  }
  return stats;
}

namespace {

// All feasible assignments of one day's tasks, depth-first; calls visit with
// the per-task worker choices.
void enumerate_day(const AllocationProblem& p, const std::vector<int>& day_tasks, size_t at,
                   std::vector<int>& cap, std::vector<int>& choice,
                   const std::vector<std::vector<double>>& reward, double acc, double& best,
                   std::vector<int>& best_choice) {
  if (at == day_tasks.size()) {
    if (acc > best) {
      best = acc;
      best_choice = choice;
    }
    return;
  }
  const int j = day_tasks[at];
  for (int i = 0; i < p.n_workers(); ++i) {
    if (cap[i] <= 0) continue;
    cap[i]--;
    choice[at] = i;
    enumerate_day(p, day_tasks, at + 1, cap, choice, reward, acc + reward[i][j], best, best_choice);
    cap[i]++;
  }
}

}  // namespace

AllocationSolution brute_force_dao(const AllocationProblem& p) {
  require_valid(p);
  const int I = p.n_workers();
  const int J = p.n_tasks();
  if (I > 5 || J > 10) throw std::invalid_argument("brute_force_dao: instance too large");
  long combos = 1;
  for (int c : p.candidate_counts) {
    combos *= c;
    if (combos > 243) throw std::invalid_argument("brute_force_dao: too many model combinations");
  }

  const std::vector<std::vector<int>> by_day = tasks_by_day(p);
  std::vector<int> y(I, 0);
  std::vector<int> best_y;
  std::vector<std::vector<int>> best_assignment;  // per day, worker per task
  double best_obj = -kInf;

  while (true) {
    const std::vector<std::vector<double>> reward = rewards_for_fixed_y(p, y);
    double total = 0.0;
    bool feasible = true;
    std::vector<std::vector<int>> assignment;
    for (const auto& day_tasks : by_day) {
      assignment.emplace_back();
      if (day_tasks.empty()) continue;
      const int t = p.tasks[day_tasks[0]].day;
      std::vector<int> cap(I);
      for (int i = 0; i < I; ++i) cap[i] = p.roster.capacity[i][t];
      std::vector<int> choice(day_tasks.size()), best_choice;
      double day_best = -kInf;
      enumerate_day(p, day_tasks, 0, cap, choice, reward, 0.0, day_best, best_choice);
      if (best_choice.empty()) {
        feasible = false;
        break;
      }
      total += day_best;
      assignment.back() = best_choice;
    }
    if (feasible && total > best_obj) {
      best_obj = total;
      best_y = y;
      best_assignment = assignment;
    }
    // odometer over model combinations
    int i = I - 1;
    while (i >= 0) {
      if (++y[i] < p.candidate_counts[i]) break;
      y[i] = 0;
      i--;
    }
    if (i < 0) break;
  }

  if (best_y.empty()) throw InfeasibleError("brute_force_dao: no feasible assignment");

  // Assemble the solution straight from the enumerated choices so this oracle
  // never leans on the flow-based solvers it is meant to check.
  AllocationSolution s;
  s.x.assign(I, std::vector<uint8_t>(J, 0));
  s.y.assign(I, std::vector<uint8_t>(p.expectation.dim2(), 0));
  for (int i = 0; i < I; ++i) s.y[i][best_y[i]] = 1;
  for (size_t t = 0; t < by_day.size(); ++t) {
    for (size_t k = 0; k < by_day[t].size(); ++k) {
      s.x[best_assignment[t][k]][by_day[t][k]] = 1;
    }
  }
  finalize_solution(p, s);
  s.status = SolverStatus::ExactOptimal;
  return s;
}

}  // namespace wfa
