#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

namespace wfa {

// Raised when a metric has no defined value on the given data
// (e.g. ROC AUC on a single-class label vector).
struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfusionCounts {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

struct ClassifierMetrics {
  std::optional<double> auc;  // unset when not computed from scores
  double tpr = 0.0;
  double tnr = 0.0;
  double ppv = 0.0;
  double for_rate = 0.0;  // false omission rate
  ConfusionCounts counts;
};

// Rank-sum ROC AUC with tied scores counted 1/2.  Throws UndefinedMetricError
// if labels are single-class, std::invalid_argument on size mismatch or empty
// input.
double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores);

ConfusionCounts count_confusion(const std::vector<int>& predicted, const std::vector<int>& actual);

// Additively smoothed rates from binary predictions:
//   ppv = (tp + alpha) / (tp + fp + 2 alpha),   for = (fn + alpha) / (tn + fn + 2 alpha),
//   tpr = (tp + alpha) / (tp + fn + 2 alpha),   tnr = (tn + alpha) / (tn + fp + 2 alpha).
// alpha = 0 reproduces the unsmoothed textbook rates (0/0 cells are a caller
// error and throw); alpha > 0 keeps every rate defined on degenerate counts.
ClassifierMetrics confusion_rates(const std::vector<int>& predicted, const std::vector<int>& actual,
                                  double alpha);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual);

}  // namespace wfa
