#include "wfa/learners/metrics.hpp"

#include <algorithm>
#include <cstddef>

namespace wfa {

double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) throw std::invalid_argument("roc_auc: size mismatch");
  if (labels.empty()) throw std::invalid_argument("roc_auc: empty input");

  const size_t n = labels.size();
  long n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("roc_auc: labels must be 0/1");
    n_pos += y;
  }
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("roc_auc undefined: labels are single-class");
  }

  // Average ranks over tied scores, then the Mann-Whitney statistic.
  std::vector<size_t> order(n);
  for (size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  size_t k = 0;
  while (k < n) {
    size_t k2 = k;
    while (k2 + 1 < n && scores[order[k2 + 1]] == scores[order[k]]) ++k2;
    const double avg_rank = 0.5 * (double(k + 1) + double(k2 + 1));  // 1-based
    for (size_t t = k; t <= k2; ++t) {
      if (labels[order[t]] == 1) rank_sum_pos += avg_rank;
    }
    k = k2 + 1;
  }
  const double u = rank_sum_pos - 0.5 * double(n_pos) * double(n_pos + 1);
  return u / (double(n_pos) * double(n_neg));
}

ConfusionCounts count_confusion(const std::vector<int>& predicted, const std::vector<int>& actual) {
  if (predicted.size() != actual.size()) {
    throw std::invalid_argument("count_confusion: size mismatch");
  }
  ConfusionCounts c;
  for (size_t k = 0; k < predicted.size(); ++k) {
    const bool p = predicted[k] != 0;
    const bool a = actual[k] != 0;
    if (p && a) c.tp++;
    else if (p && !a) c.fp++;
    else if (!p && !a) c.tn++;
    else c.fn++;
  }
  return c;
}

namespace {

double smoothed(double num, double den, double alpha, const char* what) {
  const double d = den + 2.0 * alpha;
  if (d <= 0.0) throw UndefinedMetricError(std::string(what) + " undefined: empty cell with alpha = 0");
  return (num + alpha) / d;
}

}  // namespace

ClassifierMetrics confusion_rates(const std::vector<int>& predicted, const std::vector<int>& actual,
                                  double alpha) {
  if (alpha < 0) throw std::invalid_argument("confusion_rates: alpha must be >= 0");
  ClassifierMetrics m;
  m.counts = count_confusion(predicted, actual);
  const auto& c = m.counts;
  m.ppv = smoothed(double(c.tp), double(c.tp + c.fp), alpha, "ppv");
  m.for_rate = smoothed(double(c.fn), double(c.tn + c.fn), alpha, "for");
  m.tpr = smoothed(double(c.tp), double(c.tp + c.fn), alpha, "tpr");
  m.tnr = smoothed(double(c.tn), double(c.tn + c.fp), alpha, "tnr");
  return m;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& actual) {
  if (predicted.size() != actual.size() || predicted.empty()) {
    throw std::invalid_argument("accuracy: bad input");
  }
  long ok = 0;
  for (size_t k = 0; k < predicted.size(); ++k) {
    if ((predicted[k] != 0) == (actual[k] != 0)) ok++;
  }
  return double(ok) / double(predicted.size());
}

}  // namespace wfa
