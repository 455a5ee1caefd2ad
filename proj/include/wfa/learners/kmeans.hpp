#pragma once

#include <cstdint>
#include <vector>

namespace wfa {

struct KmeansResult {
  std::vector<int> assignment;                 // point -> cluster
  std::vector<std::vector<double>> centroids;  // k rows
  double inertia = 0.0;                        // sum of squared distances
  // Inertia recorded after every assignment step, one trace per restart;
  // each trace is non-increasing.
  std::vector<std::vector<double>> traces;
};

// Lloyd's algorithm from kmeans++-style seeding, best of n_init seeded
// restarts.  Empty clusters are re-seeded to the point farthest from its
// centroid.  Deterministic for a fixed seed.  Requires 1 <= k <= |points|.
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, uint64_t seed,
                    int n_init = 10, int max_iter = 100);

}  // namespace wfa
