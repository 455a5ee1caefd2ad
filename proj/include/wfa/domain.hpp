#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace wfa {

// Comparison tolerance used for objective and probability checks throughout.
constexpr double kTol = 1e-9;

// Structural problems with inputs (bad shapes, malformed files, out-of-range
// probabilities).  CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The instance cannot be solved (capacity short of demand).  Exit code 3.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense index <-> external string id.
class SymbolTable {
 public:
  int intern(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(ids_.size());
    ids_.push_back(id);
    index_.emplace(id, idx);
    return idx;
  }
  int index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }
  const std::string& id_of(int index) const { return ids_.at(index); }
  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
};

struct TaskInstance {
  std::string id;
  int day = 0;                   // index into the planning horizon
  std::vector<double> features;  // dense numeric vector
  double value = 0.0;            // completion value; may be negative
};

struct DecisionRecord {
  std::string worker_id;
  TaskInstance task;
  int decision = 0;  // binary behaviour outcome
};

struct WorkerRoster {
  std::vector<std::string> worker_ids;
  // capacity[i][t]: tasks worker i can take on day t of the planning horizon.
  std::vector<std::vector<int>> capacity;

  int n_workers() const { return static_cast<int>(worker_ids.size()); }
  int n_days() const { return capacity.empty() ? 0 : static_cast<int>(capacity[0].size()); }
};

// Row-major dense 3-d tensor of doubles.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int d0, int d1, int d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), data_(size_t(d0) * d1 * d2, fill) {}

  double& at(int i, int j, int k) { return data_[(size_t(i) * d1_ + j) * d2_ + k]; }
  double at(int i, int j, int k) const { return data_[(size_t(i) * d1_ + j) * d2_ + k]; }
  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  int d0_ = 0, d1_ = 0, d2_ = 0;
  std::vector<double> data_;
};

// One allocation instance: workers x tasks x candidate models.
struct AllocationProblem {
  WorkerRoster roster;
  std::vector<TaskInstance> tasks;  // task.day in [0, roster.n_days())
  Tensor3 expectation;              // P[i][j][m], entries in [0, 1]
  std::vector<int> candidate_counts;  // |M(i)|, 1-based counts per worker

  int n_workers() const { return roster.n_workers(); }
  int n_tasks() const { return static_cast<int>(tasks.size()); }
  int max_models() const { return expectation.dim2(); }
};

enum class SolverStatus { ExactOptimal, Heuristic, Infeasible };

const char* to_string(SolverStatus s);
SolverStatus solver_status_from_string(const std::string& s);

struct AllocationSolution {
  std::vector<std::vector<uint8_t>> x;               // I x J
  std::vector<std::vector<uint8_t>> y;               // I x Mmax
  std::vector<std::vector<std::vector<uint8_t>>> z;  // I x J x Mmax
  double objective = 0.0;
  SolverStatus status = SolverStatus::ExactOptimal;
};

// One violated structural invariant; `where` holds the offending indices
// (e.g. {day} for capacity-shortfall, {i, j, m} for probability-range).
struct Violation {
  std::string code;
  std::vector<int> where;
  std::string detail;
};

std::string describe(const std::vector<Violation>& vs);

// Returns every violated problem invariant; empty means well-formed and
// feasible.  Capacity shortfall is reported per day.
std::vector<Violation> validate_problem(const AllocationProblem& p);

// Returns every violated solution invariant against `p` (shapes, coverage,
// capacity, one-hot model choice, linking and consistency constraints, and
// stored-objective consistency).
std::vector<Violation> check_solution(const AllocationProblem& p, const AllocationSolution& s);

// Objective sum_{i,j,m} P[i][j][m] * v_j * z[i][j][m].  Throws ValidationError
// when any structural invariant of the solution fails.
double evaluate_solution(const AllocationProblem& p, const AllocationSolution& s);

// Fills z from x and a one-hot y and recomputes the stored objective.
void finalize_solution(const AllocationProblem& p, AllocationSolution& s);

// Tasks of each day, as task indices grouped by day: result[t] = {j : tasks[j].day == t}.
std::vector<std::vector<int>> tasks_by_day(const AllocationProblem& p);

}  // namespace wfa
