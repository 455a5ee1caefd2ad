#pragma once

#include <cstdint>
#include <vector>

namespace wfa {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double prob = 0.0;  // fraction of positive rows in the node
  int vote = 0;       // hard majority vote (prob >= 0.5)
  int n_rows = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int leaf_index(const std::vector<double>& features) const;
  const TreeNode& leaf(const std::vector<double>& features) const;
  int n_leaves() const;
};

struct ForestModel {
  std::vector<Tree> trees;
  int min_samples_leaf = 1;
  int n_trees = 200;
  uint64_t seed = 0;
  int n_features = 0;
};

// Bagged classification trees: each tree fits a bootstrap resample drawn from
// an engine seeded with (seed + tree_index); each split searches a random
// subset of floor(sqrt(d)) features (at least 1) for the best Gini-impurity
// decrease; growth stops when a node is pure or a child would fall under
// min_samples_leaf.  Deterministic for a fixed seed.
ForestModel train_forest(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         int min_samples_leaf, int n_trees = 200, uint64_t seed = 0);

// Fraction of trees whose leaf votes 1; always a multiple of 1/n_trees.
double predict_proba(const ForestModel& m, const std::vector<double>& features);

}  // namespace wfa
