#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "wfa/allocator.hpp"

using namespace wfa;
using namespace wfa_test;

TEST_CASE("transportation: single worker takes everything") {
  TransportationInstance inst;
  inst.task_ids = {0, 1};
  inst.capacity = {2};
  inst.reward = {{3.0, -1.0}};
  auto res = solve_transportation(inst);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(res.assigned_worker == std::vector<int>{0, 0});
}

TEST_CASE("transportation: two-by-two picks the better diagonal") {
  TransportationInstance inst;
  inst.task_ids = {0, 1};
  inst.capacity = {1, 1};
  inst.reward = {{5.0, 1.0}, {4.0, 3.0}};
  auto res = solve_transportation(inst);
  CHECK(res.objective == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(res.assigned_worker == std::vector<int>{0, 1});
}

TEST_CASE("transportation: coverage forces negative rewards when needed") {
  TransportationInstance inst;
  inst.task_ids = {0};
  inst.capacity = {1};
  inst.reward = {{-2.0}};
  auto res = solve_transportation(inst);
  CHECK(res.objective == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("transportation: shortfall raises infeasible") {
  TransportationInstance inst;
  inst.task_ids = {0, 1};
  inst.capacity = {1, 0};
  inst.reward = {{1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(solve_transportation(inst), InfeasibleError);
}

TEST_CASE("transportation: shifting one task's column moves the total, not the choice") {
  TransportationInstance inst;
  inst.task_ids = {0, 1, 2};
  inst.capacity = {2, 2};
  inst.reward = {{4.0, 0.5, 2.0}, {1.0, 3.0, 1.5}};
  auto base = solve_transportation(inst);
  for (auto& row : inst.reward) row[1] += 10.0;
  auto shifted = solve_transportation(inst);
  CHECK(shifted.assigned_worker == base.assigned_worker);
  CHECK(shifted.objective == doctest::Approx(base.objective + 10.0).epsilon(1e-9));
}

TEST_CASE("fixed-model allocation matches brute force on random instances") {
  for (uint64_t seed = 100; seed < 130; ++seed) {
    auto p = random_problem(seed, 3, 6, 2, 1);
    auto fast = solve_uao(p);
    auto slow = brute_force_dao(p);
    CHECK(fast.objective == doctest::Approx(slow.objective).epsilon(1e-9));
    CHECK(evaluate_solution(p, fast) == doctest::Approx(fast.objective).epsilon(1e-9));
    CHECK(fast.status == SolverStatus::ExactOptimal);
  }
}

TEST_CASE("point-prediction allocation with hand-checkable matrices") {
  auto p = make_problem(
      2, {2}, 1, [](int, int, int) { return 0.5; },
      [](int j) { return j == 0 ? 4.0 : 7.0; }, [](int, int) { return 1; });

  SUBCASE("all-positive predictions collect every value") {
    std::vector<std::vector<uint8_t>> bhat = {{1, 1}, {1, 1}};
    auto s = solve_dpo(p, bhat);
    CHECK(s.objective == doctest::Approx(11.0).epsilon(1e-9));
  }
  SUBCASE("all-negative predictions collect nothing") {
    std::vector<std::vector<uint8_t>> bhat = {{0, 0}, {0, 0}};
    auto s = solve_dpo(p, bhat);
    CHECK(s.objective == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("diagonal predictions pin the assignment") {
    std::vector<std::vector<uint8_t>> bhat = {{1, 0}, {0, 1}};
    auto s = solve_dpo(p, bhat);
    CHECK(s.objective == doctest::Approx(11.0).epsilon(1e-9));
    CHECK(s.x[0][0] == 1);
    CHECK(s.x[1][1] == 1);
  }
}

TEST_CASE("joint selection pairs each worker with its strong model") {
  // Worker 0 has two specialized candidates, worker 1 a single flat one.
  const double p0[2][2] = {{0.9, 0.1}, {0.1, 0.9}};
  auto p = make_problem(
      2, {2}, 2,
      [&](int i, int j, int m) { return i == 0 ? p0[m][j] : 0.5; },
      [](int) { return 1.0; }, [](int, int) { return 1; });
  p.candidate_counts = {2, 1};

  auto res = solve_dao_exact(p);
  CHECK(res.solution.objective == doctest::Approx(1.4).epsilon(1e-9));
  CHECK(res.solution.status == SolverStatus::ExactOptimal);
  CHECK(res.bound_gap == doctest::Approx(0.0));
  // Worker 0's chosen model and task agree (model m pairs with task m here).
  for (int m = 0; m < 2; ++m) {
    if (res.solution.y[0][m]) CHECK(res.solution.x[0][m] == 1);
  }
}

TEST_CASE("joint-selection upper bound is tight when nothing is free") {
  for (uint64_t seed = 200; seed < 220; ++seed) {
    auto p = random_problem(seed);
    std::vector<int> fixed(p.n_workers());
    for (int i = 0; i < p.n_workers(); ++i) fixed[i] = static_cast<int>(seed) % p.candidate_counts[i];
    const double bound = dao_upper_bound(p, fixed);
    auto restricted = solve_uao(restrict_to_models(p, fixed));
    CHECK(bound == doctest::Approx(restricted.objective).epsilon(1e-9));
  }
}

TEST_CASE("joint-selection upper bound dominates the optimum") {
  std::vector<int> free_all;
  for (uint64_t seed = 300; seed < 330; ++seed) {
    auto p = random_problem(seed);
    free_all.assign(p.n_workers(), -1);
    const double bound = dao_upper_bound(p, free_all);
    auto best = brute_force_dao(p);
    CHECK(bound >= best.objective - 1e-9);
  }
}

TEST_CASE("single-candidate joint selection reduces to the fixed-model solver") {
  for (uint64_t seed = 400; seed < 420; ++seed) {
    auto p = random_problem(seed, 4, 8, 2, 1);
    auto dao = solve_dao_exact(p);
    auto uao = solve_uao(p);
    CHECK(dao.solution.objective == doctest::Approx(uao.objective).epsilon(1e-9));
    CHECK(dao.solution.x == uao.x);
    CHECK(dao.solution.status == SolverStatus::ExactOptimal);
  }
}

TEST_CASE("exact joint selection matches brute force and dominates every fixed policy") {
  for (uint64_t seed = 500; seed < 540; ++seed) {
    auto p = random_problem(seed);
    auto exact = solve_dao_exact(p);
    auto oracle = brute_force_dao(p);
    CHECK(exact.solution.objective == doctest::Approx(oracle.objective).epsilon(1e-9));

    // No single shared model column beats the joint optimum.
    for (int m = 0; m < p.max_models(); ++m) {
      std::vector<int> col(p.n_workers());
      for (int i = 0; i < p.n_workers(); ++i) col[i] = std::min(m, p.candidate_counts[i] - 1);
      auto fixed = solve_uao(restrict_to_models(p, col));
      CHECK(exact.solution.objective >= fixed.objective - 1e-9);
    }
  }
}

TEST_CASE("coordinate-descent heuristic: monotone traces, near-exact quality") {
  int matches = 0;
  const int trials = 50;
  for (uint64_t seed = 600; seed < 600 + trials; ++seed) {
    auto p = random_problem(seed);
    auto heur = solve_dao_heuristic(p, 4, seed);
    auto exact = solve_dao_exact(p);
    CHECK(heur.solution.objective <= exact.solution.objective + 1e-9);
    CHECK(heur.solution.status == SolverStatus::Heuristic);
    for (const auto& trace : heur.traces) {
      for (size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-9);
    }
    if (std::abs(heur.solution.objective - exact.solution.objective) <= 1e-9) matches++;
  }
  CHECK(matches >= trials * 9 / 10);
}

TEST_CASE("heuristic never loses to any single shared model column") {
  for (uint64_t seed = 700; seed < 720; ++seed) {
    auto p = random_problem(seed);
    auto heur = solve_dao_heuristic(p, 0, seed);  // pure-column starts only
    for (int m = 0; m < p.max_models(); ++m) {
      std::vector<int> col(p.n_workers());
      for (int i = 0; i < p.n_workers(); ++i) col[i] = std::min(m, p.candidate_counts[i] - 1);
      auto fixed = solve_uao(restrict_to_models(p, col));
      CHECK(heur.solution.objective >= fixed.objective - 1e-9);
    }
  }
}

TEST_CASE("solvers are deterministic across repeated calls") {
  auto p = random_problem(801);
  auto a = solve_dao_exact(p);
  auto b = solve_dao_exact(p);
  CHECK(a.solution.x == b.solution.x);
  CHECK(a.solution.y == b.solution.y);
  CHECK(a.nodes == b.nodes);
  auto ha = solve_dao_heuristic(p, 3, 55);
  auto hb = solve_dao_heuristic(p, 3, 55);
  CHECK(ha.solution.x == hb.solution.x);
  CHECK(ha.traces == hb.traces);
}

TEST_CASE("scaling every value leaves the exact assignment unchanged") {
  auto p = random_problem(802);
  auto base = solve_dao_exact(p);
  AllocationProblem scaled = p;
  for (auto& t : scaled.tasks) t.value *= 2.5;
  auto res = solve_dao_exact(scaled);
  CHECK(res.solution.x == base.solution.x);
  CHECK(res.solution.y == base.solution.y);
  CHECK(res.solution.objective == doctest::Approx(2.5 * base.solution.objective).epsilon(1e-9));
}

TEST_CASE("random policy on a single worker is the forced assignment") {
  auto p = make_problem(
      1, {2}, 1, [](int, int j, int) { return j == 0 ? 0.3 : 0.8; },
      [](int j) { return j == 0 ? 2.0 : -1.0; }, [](int, int) { return 2; });
  auto stats = random_policy_value(p, 500, 9);
  const double forced = 0.3 * 2.0 + 0.8 * -1.0;
  CHECK(stats.mean == doctest::Approx(forced).epsilon(1e-12));
  CHECK(stats.std_error == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(stats.n_samples == 500);
}

TEST_CASE("random policy matches its exact enumeration") {
  int far = 0;
  for (uint64_t seed = 900; seed < 920; ++seed) {
    auto p = random_problem(seed, 3, 4, 2, 3);
    const double expect = random_policy_expectation(p);
    auto stats = random_policy_value(p, 20000, seed);
    const double slack = 3.0 * stats.std_error + 1e-9;
    if (std::abs(stats.mean - expect) > slack) far++;
  }
  // Three standard errors: allow a lone outlier across twenty instances.
  CHECK(far <= 1);
}

TEST_CASE("random policy sampling is seed-deterministic") {
  auto p = random_problem(901);
  auto a = random_policy_value(p, 3000, 42);
  auto b = random_policy_value(p, 3000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("brute force stays within its guards") {
  // 6 workers exceeds the worker guard.
  auto p6 = make_problem(
      6, {6}, 1, [](int, int, int) { return 0.5; }, [](int) { return 1.0; },
      [](int, int) { return 1; });
  CHECK_THROWS_AS(brute_force_dao(p6), std::invalid_argument);
  // 3^5 = 243 combinations pass; 4 models on 5 workers do not.
  auto pm = make_problem(
      5, {5}, 4, [](int, int, int) { return 0.5; }, [](int) { return 1.0; },
      [](int, int) { return 1; });
  CHECK_THROWS_AS(brute_force_dao(pm), std::invalid_argument);
}

TEST_CASE("require_valid separates infeasible from malformed") {
  auto shortfall = make_problem(
      2, {2}, 1, [](int, int, int) { return 0.5; }, [](int) { return 1.0; },
      [](int, int) { return 0; });
  CHECK_THROWS_AS(require_valid(shortfall), InfeasibleError);

  auto badp = make_problem(
      1, {1}, 1, [](int, int, int) { return 1.3; }, [](int) { return 1.0; },
      [](int, int) { return 1; });
  CHECK_THROWS_AS(require_valid(badp), ValidationError);

  auto fine = random_problem(903);
  CHECK_NOTHROW(require_valid(fine));
}

TEST_CASE("one-by-one instance is trivial everywhere") {
  auto p = make_problem(
      1, {1}, 1, [](int, int, int) { return 0.7; }, [](int) { return 3.0; },
      [](int, int) { return 1; });
  CHECK(solve_uao(p).objective == doctest::Approx(2.1).epsilon(1e-12));
  CHECK(brute_force_dao(p).objective == doctest::Approx(2.1).epsilon(1e-12));
  CHECK(solve_dao_exact(p).solution.objective == doctest::Approx(2.1).epsilon(1e-12));
}
