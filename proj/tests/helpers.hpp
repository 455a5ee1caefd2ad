#pragma once

// Shared fixture builders and independent oracles for the test binaries.

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "wfa/allocator.hpp"
#include "wfa/domain.hpp"

namespace wfa_test {

using namespace wfa;

// Dense problem built from callables: p_fn(i, j, m), v_fn(j), cap_fn(i, t).
// Tasks are dealt to days round-robin via tasks_per_day.
inline AllocationProblem make_problem(int n_workers, const std::vector<int>& tasks_per_day,
                                      int n_models,
                                      const std::function<double(int, int, int)>& p_fn,
                                      const std::function<double(int)>& v_fn,
                                      const std::function<int(int, int)>& cap_fn) {
  AllocationProblem p;
  const int days = static_cast<int>(tasks_per_day.size());
  for (int i = 0; i < n_workers; ++i) {
    p.roster.worker_ids.push_back("w" + std::to_string(i));
    std::vector<int> row(days);
    for (int t = 0; t < days; ++t) row[t] = cap_fn(i, t);
    p.roster.capacity.push_back(std::move(row));
  }
  int j = 0;
  for (int t = 0; t < days; ++t) {
    for (int k = 0; k < tasks_per_day[t]; ++k, ++j) {
      TaskInstance task;
      task.id = "t" + std::to_string(j);
      task.day = t;
      task.value = v_fn(j);
      p.tasks.push_back(std::move(task));
    }
  }
  const int J = static_cast<int>(p.tasks.size());
  p.expectation = Tensor3(n_workers, J, n_models);
  for (int i = 0; i < n_workers; ++i) {
    for (int q = 0; q < J; ++q) {
      for (int m = 0; m < n_models; ++m) p.expectation.at(i, q, m) = p_fn(i, q, m);
    }
  }
  p.candidate_counts.assign(n_workers, n_models);
  return p;
}

// Seeded random valid instance within the brute-force guards.  Capacities are
// repaired upward until every day is coverable; when `tight` they match the
// day demand exactly.
inline AllocationProblem random_problem(uint64_t seed, int max_workers = 4, int max_tasks = 8,
                                        int max_days = 2, int max_models = 3, bool tight = false) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int I = pick(1, max_workers);
  const int days = pick(1, max_days);
  const int J = pick(1, max_tasks);

  AllocationProblem p;
  for (int i = 0; i < I; ++i) {
    p.roster.worker_ids.push_back("w" + std::to_string(i));
    p.roster.capacity.push_back(std::vector<int>(days, 0));
  }
  std::vector<int> demand(days, 0);
  std::uniform_real_distribution<double> value(-2.0, 5.0);
  for (int j = 0; j < J; ++j) {
    TaskInstance t;
    t.id = "t" + std::to_string(j);
    t.day = pick(0, days - 1);
    t.value = value(rng);
    demand[t.day]++;
    p.tasks.push_back(std::move(t));
  }

  p.candidate_counts.resize(I);
  int depth = 1;
  for (int i = 0; i < I; ++i) {
    p.candidate_counts[i] = pick(1, max_models);
    depth = std::max(depth, p.candidate_counts[i]);
  }
  p.expectation = Tensor3(I, J, depth);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      for (int m = 0; m < p.candidate_counts[i]; ++m) p.expectation.at(i, j, m) = prob(rng);
    }
  }

  for (int t = 0; t < days; ++t) {
    if (!tight) {
      for (int i = 0; i < I; ++i) p.roster.capacity[i][t] = pick(0, 2);
    }
    int cap = 0;
    for (int i = 0; i < I; ++i) cap += p.roster.capacity[i][t];
    while (cap < demand[t]) {
      p.roster.capacity[pick(0, I - 1)][t] += 1;
      cap++;
    }
  }
  return p;
}

// Exact expected value of the uniform random policy, by enumerating the
// sampler's own process: a uniform task order per day, then each task takes a
// uniformly random worker among those with remaining capacity.  Model choice
// is independent and uniform over M(i), so it enters as a per-(i, j) mean.
// Exponential in the day size; keep instances tiny.
namespace detail {

inline void walk_orders(const AllocationProblem& p, std::vector<int>& order, size_t at,
                        std::vector<int>& cap, double prob,
                        std::vector<std::vector<double>>& pi) {
  if (at == order.size()) return;
  // Sum over which worker takes order[at], then recurse; the assignment
  // probabilities factor over the remaining choices.
  std::vector<int> avail;
  for (int i = 0; i < p.n_workers(); ++i) {
    if (cap[i] > 0) avail.push_back(i);
  }
  const double share = prob / static_cast<double>(avail.size());
  for (int i : avail) {
    pi[i][order[at]] += share;
    cap[i]--;
    walk_orders(p, order, at + 1, cap, share, pi);
    cap[i]++;
  }
}

}  // namespace detail

inline double random_policy_expectation(const AllocationProblem& p) {
  const int I = p.n_workers();
  const int J = p.n_tasks();
  std::vector<std::vector<double>> pi(I, std::vector<double>(J, 0.0));

  for (const auto& day_tasks : tasks_by_day(p)) {
    if (day_tasks.empty()) continue;
    const int t = p.tasks[day_tasks[0]].day;
    std::vector<int> order = day_tasks;
    std::sort(order.begin(), order.end());
    long n_orders = 0;
    std::vector<std::vector<double>> day_pi(I, std::vector<double>(J, 0.0));
    do {
      std::vector<int> cap(I);
      for (int i = 0; i < I; ++i) cap[i] = p.roster.capacity[i][t];
      std::vector<int> ord = order;
      detail::walk_orders(p, ord, 0, cap, 1.0, day_pi);
      n_orders++;
    } while (std::next_permutation(order.begin(), order.end()));
    for (int i = 0; i < I; ++i) {
      for (int j : day_tasks) pi[i][j] += day_pi[i][j] / static_cast<double>(n_orders);
    }
  }

  double expectation = 0.0;
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      double mean_p = 0.0;
      for (int m = 0; m < p.candidate_counts[i]; ++m) mean_p += p.expectation.at(i, j, m);
      mean_p /= static_cast<double>(p.candidate_counts[i]);
      expectation += pi[i][j] * mean_p * p.tasks[j].value;
    }
  }
  return expectation;
}

inline bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.code == code; });
}

}  // namespace wfa_test
