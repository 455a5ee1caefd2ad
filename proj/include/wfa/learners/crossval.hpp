#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "wfa/learners/metrics.hpp"
#include "wfa/util.hpp"

namespace wfa {

enum class CvMetric { Auc, Accuracy };

struct CvOutcome {
  double best_param = 0.0;
  std::vector<double> mean_scores;  // one per grid entry, in grid order
  bool accuracy_fallback = false;   // set when AUC was requested but undefined on every fold
};

// Deterministic label-stratified fold ids: positives and negatives are
// shuffled separately with the seeded engine and dealt round-robin.
inline std::vector<int> stratified_folds(const std::vector<int>& y, int folds, uint64_t seed) {
  std::vector<int> pos, neg;
  for (size_t r = 0; r < y.size(); ++r) (y[r] ? pos : neg).push_back(static_cast<int>(r));
  std::mt19937_64 rng(mix_seed(seed, "cv-folds"));
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  std::vector<int> fold_of(y.size(), 0);
  for (size_t k = 0; k < pos.size(); ++k) fold_of[pos[k]] = static_cast<int>(k % folds);
  for (size_t k = 0; k < neg.size(); ++k) fold_of[neg[k]] = static_cast<int>(k % folds);
  return fold_of;
}

// Grid search by k-fold cross-validation.  fit(x, y, param) -> model and
// score(model, features) -> double are supplied by the caller.  Folds whose
// validation labels are single-class contribute no AUC; if that holds for
// every fold the metric falls back to accuracy at threshold 0.5.  Score ties
// within 1e-12 resolve toward the larger parameter (stronger regularization).
template <typename FitFn, typename ScoreFn>
CvOutcome cross_validate(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                         const std::vector<double>& grid, int folds, uint64_t seed, CvMetric metric,
                         FitFn&& fit, ScoreFn&& score) {
  if (x.size() != y.size()) throw std::invalid_argument("cross_validate: size mismatch");
  if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
  if (static_cast<int>(x.size()) < folds) {
    throw std::invalid_argument("cross_validate: fewer rows than folds");
  }
  if (grid.empty()) throw std::invalid_argument("cross_validate: empty grid");

  const std::vector<int> fold_of = stratified_folds(y, folds, seed);

  std::vector<char> fold_auc_ok(folds, 0);
  for (int f = 0; f < folds; ++f) {
    bool has0 = false, has1 = false;
    for (size_t r = 0; r < y.size(); ++r) {
      if (fold_of[r] == f) (y[r] ? has1 : has0) = true;
    }
    fold_auc_ok[f] = (has0 && has1) ? 1 : 0;
  }
  bool use_auc = metric == CvMetric::Auc &&
                 std::any_of(fold_auc_ok.begin(), fold_auc_ok.end(), [](char c) { return c != 0; });

  CvOutcome out;
  out.accuracy_fallback = metric == CvMetric::Auc && !use_auc;

  for (double param : grid) {
    double total = 0.0;
    int scored = 0;
    for (int f = 0; f < folds; ++f) {
      if (use_auc && !fold_auc_ok[f]) continue;
      std::vector<std::vector<double>> xtr;
      std::vector<int> ytr, yval;
      std::vector<std::vector<double>> xval;
      for (size_t r = 0; r < x.size(); ++r) {
        if (fold_of[r] == f) {
          xval.push_back(x[r]);
          yval.push_back(y[r]);
        } else {
          xtr.push_back(x[r]);
          ytr.push_back(y[r]);
        }
      }
      if (xval.empty() || xtr.empty()) continue;
      auto model = fit(xtr, ytr, param);
      std::vector<double> scores(xval.size());
      for (size_t r = 0; r < xval.size(); ++r) scores[r] = score(model, xval[r]);
      if (use_auc) {
        total += roc_auc(yval, scores);
      } else {
        std::vector<int> pred(scores.size());
        for (size_t r = 0; r < scores.size(); ++r) pred[r] = scores[r] >= 0.5 ? 1 : 0;
        total += accuracy(pred, yval);
      }
      scored++;
    }
    out.mean_scores.push_back(scored > 0 ? total / double(scored)
                                         : -std::numeric_limits<double>::infinity());
  }

  size_t best = 0;
  for (size_t g = 1; g < grid.size(); ++g) {
    const double s = out.mean_scores[g], b = out.mean_scores[best];
    if (s > b + 1e-12 || (std::abs(s - b) <= 1e-12 && grid[g] > grid[best])) best = g;
  }
  out.best_param = grid[best];
  return out;
}

}  // namespace wfa
