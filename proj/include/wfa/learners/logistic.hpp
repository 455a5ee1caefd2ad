#pragma once

#include <utility>
#include <vector>

namespace wfa {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  // Set when training saw a single label value; the model then predicts near
  // that class for every input.
  bool single_class = false;
};

// Regularized mean log-loss:  (1/n) sum_i log(1 + exp(-(2 y_i - 1) z_i)) + lambda ||w||^2
// with z_i = w . x_i + b;  the bias is not penalized.
double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                     double lambda, const std::vector<double>& w, double b);

// Analytic gradient of logistic_loss, returned as (dL/dw, dL/db).
std::pair<std::vector<double>, double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                                         const std::vector<int>& y, double lambda,
                                                         const std::vector<double>& w, double b);

// Full-batch Newton descent with backtracking line search, run until the
// gradient norm drops to `grad_tol` or `max_iter` iterations pass.  The
// optimizer is deterministic: no sampling, fixed initialization at zero.
// Single-class input returns a flagged model with a saturating bias.
LinearModel train_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           double lambda, double grad_tol = 1e-6, int max_iter = 10000);

// sigmoid(w . features + b); throws std::invalid_argument on dimension mismatch.
double predict_proba(const LinearModel& m, const std::vector<double>& features);

}  // namespace wfa
