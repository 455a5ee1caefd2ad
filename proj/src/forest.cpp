#include "wfa/learners/forest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wfa {

int Tree::leaf_index(const std::vector<double>& features) const {
  int k = 0;
  while (nodes[k].feature >= 0) {
    k = features[nodes[k].feature] <= nodes[k].threshold ? nodes[k].left : nodes[k].right;
  }
  return k;
}

const TreeNode& Tree::leaf(const std::vector<double>& features) const {
  return nodes[leaf_index(features)];
}

int Tree::n_leaves() const {
  int n = 0;
  for (const auto& nd : nodes) {
    if (nd.feature < 0) n++;
  }
  return n;
}

namespace {

struct TreeBuilder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  int msl;
  int n_feat_sample;
  std::mt19937_64& rng;
  std::vector<int> rows;  // bootstrap row ids, partitioned in place during the build
  std::vector<int> feature_pool;
  Tree tree;

  // Best split of rows[lo, hi) on one feature; returns impurity decrease.
  struct Split {
    double gain = -1.0;
    int feature = -1;
    double threshold = 0.0;
  };

  void find_split_on_feature(int f, int lo, int hi, long n1_total, Split& best,
                             std::vector<std::pair<double, int>>& scratch) {
    const int n = hi - lo;
    scratch.clear();
    for (int k = lo; k < hi; ++k) scratch.push_back({x[rows[k]][f], y[rows[k]]});
    std::sort(scratch.begin(), scratch.end());

    const double nn = double(n);
    const double p_parent = double(n1_total) / nn;
    const double g_parent = 2.0 * p_parent * (1.0 - p_parent);

    long n1_left = 0;
    for (int s = 1; s < n; ++s) {
      n1_left += scratch[s - 1].second;
      if (scratch[s].first == scratch[s - 1].first) continue;  // not a boundary
      const int n_left = s, n_right = n - s;
      if (n_left < msl || n_right < msl) continue;
      const double pl = double(n1_left) / double(n_left);
      const double pr = double(n1_total - n1_left) / double(n_right);
      const double g = (double(n_left) * 2.0 * pl * (1.0 - pl) +
                        double(n_right) * 2.0 * pr * (1.0 - pr)) /
                       nn;
      const double gain = g_parent - g;
      if (gain > best.gain + 1e-12) {
        best = {gain, f, scratch[s - 1].first};
      }
    }
  }

  int build(int lo, int hi) {
    const int n = hi - lo;
    long n1 = 0;
    for (int k = lo; k < hi; ++k) n1 += y[rows[k]];

    const int node_id = static_cast<int>(tree.nodes.size());
    TreeNode node;
    node.n_rows = n;
    node.prob = double(n1) / double(n);
    node.vote = node.prob >= 0.5 ? 1 : 0;
    tree.nodes.push_back(node);

    const bool pure = (n1 == 0 || n1 == n);
    if (pure || n < 2 * msl) return node_id;

    // Sample distinct candidate features, then scan them in index order so
    // equal-gain ties resolve to the lowest feature.
    const int d = static_cast<int>(feature_pool.size());
    for (int k = 0; k < n_feat_sample; ++k) {
      std::uniform_int_distribution<int> pick(k, d - 1);
      std::swap(feature_pool[k], feature_pool[pick(rng)]);
    }
    std::vector<int> candidates(feature_pool.begin(), feature_pool.begin() + n_feat_sample);
    std::sort(candidates.begin(), candidates.end());

    Split best;
    std::vector<std::pair<double, int>> scratch;
    scratch.reserve(n);
    for (int f : candidates) find_split_on_feature(f, lo, hi, n1, best, scratch);
    if (best.feature < 0 || best.gain <= 1e-12) return node_id;

    const auto mid_it = std::partition(rows.begin() + lo, rows.begin() + hi, [&](int r) {
      return x[r][best.feature] <= best.threshold;
    });
    const int mid = static_cast<int>(mid_it - rows.begin());

    tree.nodes[node_id].feature = best.feature;
    tree.nodes[node_id].threshold = best.threshold;
    const int left_id = build(lo, mid);
    tree.nodes[node_id].left = left_id;
    const int right_id = build(mid, hi);
    tree.nodes[node_id].right = right_id;
    return node_id;
  }
};

}  // namespace

ForestModel train_forest(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         int min_samples_leaf, int n_trees, uint64_t seed) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("forest: bad input sizes");
  if (min_samples_leaf < 1 || min_samples_leaf > static_cast<int>(x.size())) {
    throw std::invalid_argument("forest: min_samples_leaf outside [1, rows]");
  }
  if (n_trees < 1) throw std::invalid_argument("forest: n_trees must be >= 1");
  for (const auto& row : x) {
    if (row.size() != x[0].size()) throw std::invalid_argument("forest: ragged feature rows");
  }

  const int n = static_cast<int>(x.size());
  const int d = static_cast<int>(x[0].size());

  ForestModel m;
  m.min_samples_leaf = min_samples_leaf;
  m.n_trees = n_trees;
  m.seed = seed;
  m.n_features = d;
  m.trees.resize(n_trees);

  for (int t = 0; t < n_trees; ++t) {
    std::mt19937_64 rng(seed + uint64_t(t));
    TreeBuilder builder{x, y, min_samples_leaf,
                        std::max(1, int(std::floor(std::sqrt(double(d))))), rng, {}, {}, {}};
    builder.rows.resize(n);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < n; ++k) builder.rows[k] = pick(rng);
    builder.feature_pool.resize(d);
    for (int f = 0; f < d; ++f) builder.feature_pool[f] = f;
    builder.build(0, n);
    m.trees[t] = std::move(builder.tree);
  }
  return m;
}

double predict_proba(const ForestModel& m, const std::vector<double>& features) {
  if (static_cast<int>(features.size()) != m.n_features) {
    throw std::invalid_argument("predict_proba: feature dimension mismatch");
  }
  long votes = 0;
  for (const auto& t : m.trees) votes += t.leaf(features).vote;
  return double(votes) / double(m.trees.size());
}

}  // namespace wfa
