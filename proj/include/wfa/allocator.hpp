#pragma once

#include <cstdint>
#include <vector>

#include "wfa/domain.hpp"

namespace wfa {

// One day's assignment subproblem: every listed task must go to exactly one
// worker, worker i takes at most capacity[i] of them, rewards may be negative.
struct TransportationInstance {
  std::vector<int> task_ids;                // caller-side task indices, one column each
  std::vector<int> capacity;                // per worker, this day
  std::vector<std::vector<double>> reward;  // reward[i][k] for (worker i, task_ids[k])
};

struct TransportationResult {
  std::vector<int> assigned_worker;  // one worker per task column
  double objective = 0.0;
};

// Exact maximum-reward assignment via successive-shortest-path min-cost flow
// (rewards negated into costs).  Throws InfeasibleError when capacity cannot
// cover the tasks.
TransportationResult solve_transportation(const TransportationInstance& inst);

// Fixed-model allocation: requires |M(i)| == 1 for every worker; decomposes
// into one transportation problem per day.  Status exact-optimal.
AllocationSolution solve_uao(const AllocationProblem& p);

// Deterministic point-prediction allocation: expectations are replaced by the
// binary matrix bhat ([i][j] in {0,1}); objective counts v_j exactly when a
// predicted-positive pair is assigned.
AllocationSolution solve_dpo(const AllocationProblem& p, const std::vector<std::vector<uint8_t>>& bhat);

// Restriction of `p` where worker i's single candidate is its model m_of[i].
AllocationProblem restrict_to_models(const AllocationProblem& p, const std::vector<int>& m_of);

// The single-candidate problem induced by a binary prediction matrix.
AllocationProblem dpo_problem(const AllocationProblem& p, const std::vector<std::vector<uint8_t>>& bhat);

// Upper bound for joint model choice + assignment: workers with
// fixed_model[i] >= 0 use that model, free workers (-1) may use a different
// candidate per task.  Tight when every worker is fixed or |M(i)| == 1.
double dao_upper_bound(const AllocationProblem& p, const std::vector<int>& fixed_model);

struct DaoExactResult {
  AllocationSolution solution;
  double bound_gap = 0.0;  // best remaining bound minus incumbent (0 when proven optimal)
  long nodes = 0;          // branch-and-bound nodes expanded
};

// Best-first branch and bound on the per-worker model choice; assignments are
// solved exactly per day once models are fixed.  Branches on the free worker
// whose relaxation mixes the most models; children are pruned against
// incumbent + 1e-9.  Hitting node_limit downgrades status to heuristic and
// reports the remaining bound gap.
DaoExactResult solve_dao_exact(const AllocationProblem& p, long node_limit = 1000000);

struct DaoHeuristicResult {
  AllocationSolution solution;
  // One trace per start: objective at the start followed by every accepted
  // coordinate move; each trace is non-decreasing.
  std::vector<std::vector<double>> traces;
};

// Coordinate descent over per-worker model choices, re-solving the day
// assignments after every tentative move.  Runs `restarts` seeded random
// starts plus one deterministic start per candidate column (so the result is
// never worse than any single-model policy).  Status heuristic.
DaoHeuristicResult solve_dao_heuristic(const AllocationProblem& p, int restarts, uint64_t seed);

struct RandomPolicyStats {
  double mean = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

// Monte Carlo value of the uniform random policy: per worker a uniform model
// choice, per day a uniform feasible assignment (tasks visited in random
// order, each assigned to a uniformly chosen worker with remaining capacity).
RandomPolicyStats random_policy_value(const AllocationProblem& p, long n_samples, uint64_t seed);

// Exhaustive oracle for small instances: enumerates every model combination
// and every feasible assignment.  Guards: workers <= 5, tasks <= 10, and at
// most 243 model combinations.
AllocationSolution brute_force_dao(const AllocationProblem& p);

// Shared guard: throws InfeasibleError on capacity shortfall, ValidationError
// on any other problem violation.
void require_valid(const AllocationProblem& p);

}  // namespace wfa
