#include "wfa/learners/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "wfa/util.hpp"

namespace wfa {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void check_rows(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("logistic: bad input sizes");
  for (const auto& row : x) {
    if (row.size() != x[0].size()) throw std::invalid_argument("logistic: ragged feature rows");
  }
}

// Cholesky solve of A s = rhs for a small symmetric positive-definite A.
// Returns false if the factorization breaks down.
bool cholesky_solve(std::vector<std::vector<double>> a, std::vector<double> rhs,
                    std::vector<double>& out) {
  const size_t n = a.size();
  for (size_t c = 0; c < n; ++c) {
    double d = a[c][c];
    for (size_t k = 0; k < c; ++k) d -= a[c][k] * a[c][k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    a[c][c] = std::sqrt(d);
    for (size_t r = c + 1; r < n; ++r) {
      double s = a[r][c];
      for (size_t k = 0; k < c; ++k) s -= a[r][k] * a[c][k];
      a[r][c] = s / a[c][c];
    }
  }
  for (size_t r = 0; r < n; ++r) {  // L v = rhs
    double s = rhs[r];
    for (size_t k = 0; k < r; ++k) s -= a[r][k] * rhs[k];
    rhs[r] = s / a[r][r];
  }
  out.assign(n, 0.0);
  for (size_t r = n; r-- > 0;) {  // L^T out = v
    double s = rhs[r];
    for (size_t k = r + 1; k < n; ++k) s -= a[k][r] * out[k];
    out[r] = s / a[r][r];
  }
  return true;
}

}  // namespace

double logistic_loss(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                     double lambda, const std::vector<double>& w, double b) {
  check_rows(x, y);
  const double n = double(x.size());
  double loss = 0.0;
  for (size_t r = 0; r < x.size(); ++r) {
    const double z = dot(w, x[r]) + b;
    loss += y[r] ? softplus(-z) : softplus(z);
  }
  loss /= n;
  for (double wk : w) loss += lambda * wk * wk;
  return loss;
}

std::pair<std::vector<double>, double> logistic_gradient(const std::vector<std::vector<double>>& x,
                                                         const std::vector<int>& y, double lambda,
                                                         const std::vector<double>& w, double b) {
  check_rows(x, y);
  const size_t d = w.size();
  const double n = double(x.size());
  std::vector<double> dw(d, 0.0);
  double db = 0.0;
  for (size_t r = 0; r < x.size(); ++r) {
    const double resid = sigmoid(dot(w, x[r]) + b) - double(y[r]);
    for (size_t k = 0; k < d; ++k) dw[k] += resid * x[r][k];
    db += resid;
  }
  for (size_t k = 0; k < d; ++k) dw[k] = dw[k] / n + 2.0 * lambda * w[k];
  db /= n;
  return {dw, db};
}

LinearModel train_logistic(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                           double lambda, double grad_tol, int max_iter) {
  check_rows(x, y);
  if (lambda < 0) throw std::invalid_argument("logistic: lambda must be >= 0");
  const size_t d = x[0].size();

  bool any0 = false, any1 = false;
  for (int v : y) (v ? any1 : any0) = true;
  if (!any0 || !any1) {
    LinearModel m;
    m.weights.assign(d, 0.0);
    m.bias = any1 ? 25.0 : -25.0;  // saturates the sigmoid at the observed class
    m.single_class = true;
    return m;
  }

  LinearModel m;
  m.weights.assign(d, 0.0);
  m.bias = 0.0;

  const double n = double(x.size());
  double loss = logistic_loss(x, y, lambda, m.weights, m.bias);

  for (int iter = 0; iter < max_iter; ++iter) {
    auto [dw, db] = logistic_gradient(x, y, lambda, m.weights, m.bias);
    double gnorm2 = db * db;
    for (double g : dw) gnorm2 += g * g;
    if (std::sqrt(gnorm2) <= grad_tol) break;

    // Newton system over [w; b] with ridge on the weight block only.
    std::vector<std::vector<double>> h(d + 1, std::vector<double>(d + 1, 0.0));
    for (size_t r = 0; r < x.size(); ++r) {
      const double p = sigmoid(dot(m.weights, x[r]) + m.bias);
      const double s = p * (1.0 - p) / n;
      for (size_t a = 0; a < d; ++a) {
        const double sa = s * x[r][a];
        for (size_t bcol = a; bcol < d; ++bcol) h[a][bcol] += sa * x[r][bcol];
        h[a][d] += sa;
      }
      h[d][d] += s;
    }
    for (size_t a = 0; a < d; ++a) {
      h[a][a] += 2.0 * lambda;
      for (size_t bcol = a + 1; bcol <= d; ++bcol) h[bcol][a] = h[a][bcol];
    }

    std::vector<double> g(d + 1);
    for (size_t k = 0; k < d; ++k) g[k] = dw[k];
    g[d] = db;

    std::vector<double> step;
    double jitter = 1e-10;
    while (!cholesky_solve(h, g, step)) {
      for (size_t a = 0; a <= d; ++a) h[a][a] += jitter;
      jitter *= 10.0;
      if (jitter > 1.0) {  // fall back to plain gradient direction
        step = g;
        break;
      }
    }

    // Backtracking line search on the descent direction -step.
    double gdotstep = 0.0;
    for (size_t k = 0; k <= d; ++k) gdotstep += g[k] * step[k];
    if (gdotstep <= 0) {  // not a descent direction; use the gradient
      step = g;
      gdotstep = 0.0;
      for (size_t k = 0; k <= d; ++k) gdotstep += g[k] * g[k];
    }

    double t = 1.0;
    std::vector<double> w_new(d);
    double b_new = 0.0, loss_new = loss;
    for (int halving = 0; halving < 60; ++halving) {
      for (size_t k = 0; k < d; ++k) w_new[k] = m.weights[k] - t * step[k];
      b_new = m.bias - t * step[d];
      loss_new = logistic_loss(x, y, lambda, w_new, b_new);
      if (loss_new <= loss - 1e-4 * t * gdotstep) break;
      t *= 0.5;
    }
    m.weights = w_new;
    m.bias = b_new;
    if (loss - loss_new <= 1e-15 * (1.0 + std::abs(loss))) {
      loss = loss_new;
      break;  // numerically stalled; gradient is as small as it will get
    }
    loss = loss_new;
  }
  return m;
}

double predict_proba(const LinearModel& m, const std::vector<double>& features) {
  if (features.size() != m.weights.size()) {
    throw std::invalid_argument("predict_proba: feature dimension mismatch");
  }
  return sigmoid(dot(m.weights, features) + m.bias);
}

}  // namespace wfa
