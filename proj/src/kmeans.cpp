#include "wfa/learners/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

#include "wfa/util.hpp"

namespace wfa {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

struct RunResult {
  std::vector<int> assignment;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

RunResult run_once(const std::vector<std::vector<double>>& pts, int k, uint64_t seed, int max_iter) {
  const int n = static_cast<int>(pts.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // kmeans++ seeding: first centroid uniform, later ones with probability
  // proportional to squared distance from the chosen set.
  std::vector<std::vector<double>> centroids;
  centroids.reserve(k);
  std::uniform_int_distribution<int> pick(0, n - 1);
  centroids.push_back(pts[pick(rng)]);
  std::vector<double> d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int p = 0; p < n; ++p) {
      double best = std::numeric_limits<double>::max();
      for (const auto& cen : centroids) best = std::min(best, dist2(pts[p], cen));
      d2[p] = best;
      total += best;
    }
    int chosen = -1;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (int p = 0; p < n; ++p) {
        acc += d2[p];
        if (acc >= target) {
          chosen = p;
          break;
        }
      }
      if (chosen < 0) chosen = n - 1;  // guard against rounding at the tail
    } else {
      chosen = pick(rng);  // all points coincide with centroids already
    }
    centroids.push_back(pts[chosen]);
  }

  RunResult res;
  res.assignment.assign(n, -1);
  const size_t dim = pts[0].size();

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int p = 0; p < n; ++p) {
      int best_c = 0;
      double best_d = dist2(pts[p], centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(pts[p], centroids[c]);
        if (d < best_d) {  // strict: ties keep the lowest cluster index
          best_d = d;
          best_c = c;
        }
      }
      if (res.assignment[p] != best_c) changed = true;
      res.assignment[p] = best_c;
      inertia += best_d;
    }
    res.trace.push_back(inertia);
    res.inertia = inertia;
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (int p = 0; p < n; ++p) {
      counts[res.assignment[p]]++;
      for (size_t q = 0; q < dim; ++q) sums[res.assignment[p]][q] += pts[p][q];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (size_t q = 0; q < dim; ++q) centroids[c][q] = sums[c][q] / double(counts[c]);
      } else {
        // Re-seed an empty cluster at the point farthest from its centroid.
        int far_p = 0;
        double far_d = -1.0;
        for (int p = 0; p < n; ++p) {
          const double d = dist2(pts[p], centroids[res.assignment[p]]);
          if (d > far_d) {
            far_d = d;
            far_p = p;
          }
        }
        centroids[c] = pts[far_p];
      }
    }
  }
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                    int n_init, int max_iter) {
  if (points.empty()) throw std::invalid_argument("kmeans: no points");
  if (k < 1 || k > static_cast<int>(points.size())) {
    throw std::invalid_argument("kmeans: k outside [1, points]");
  }
  if (n_init < 1) throw std::invalid_argument("kmeans: n_init must be >= 1");
  for (const auto& p : points) {
    if (p.size() != points[0].size()) throw std::invalid_argument("kmeans: ragged points");
  }

  KmeansResult out;
  double best = std::numeric_limits<double>::max();
  for (int r = 0; r < n_init; ++r) {
    RunResult run = run_once(points, k, mix_seed(seed, uint64_t(r)), max_iter);
    out.traces.push_back(run.trace);
    if (run.inertia < best) {  // strict: ties keep the earliest restart
      best = run.inertia;
      out.assignment = std::move(run.assignment);
      out.centroids = std::move(run.centroids);
      out.inertia = run.inertia;
    }
  }
  return out;
}

}  // namespace wfa
