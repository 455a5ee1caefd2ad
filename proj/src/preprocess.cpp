#include "wfa/learners/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wfa {

void Standardizer::fit(const std::vector<std::vector<double>>& x) {
  if (x.empty()) throw std::invalid_argument("standardizer: no rows");
  const size_t d = x[0].size();
  mean.assign(d, 0.0);
  scale.assign(d, 1.0);
  for (const auto& row : x) {
    if (row.size() != d) throw std::invalid_argument("standardizer: ragged rows");
    for (size_t k = 0; k < d; ++k) mean[k] += row[k];
  }
  for (size_t k = 0; k < d; ++k) mean[k] /= double(x.size());
  std::vector<double> var(d, 0.0);
  for (const auto& row : x) {
    for (size_t k = 0; k < d; ++k) var[k] += (row[k] - mean[k]) * (row[k] - mean[k]);
  }
  for (size_t k = 0; k < d; ++k) {
    const double s = std::sqrt(var[k] / double(x.size()));
    scale[k] = s > 0.0 ? s : 1.0;
  }
}

std::vector<double> Standardizer::transform(const std::vector<double>& v) const {
  if (v.size() != mean.size()) throw std::invalid_argument("standardizer: dimension mismatch");
  std::vector<double> out(v.size());
  for (size_t k = 0; k < v.size(); ++k) out[k] = (v[k] - mean[k]) / scale[k];
  return out;
}

std::vector<std::vector<double>> Standardizer::transform_all(
    const std::vector<std::vector<double>>& x) const {
  std::vector<std::vector<double>> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(transform(row));
  return out;
}

void OneHotEncoder::fit(const std::vector<std::string>& column) {
  categories.clear();
  index_.clear();
  for (const auto& v : column) {
    if (index_.emplace(v, categories.size()).second) categories.push_back(v);
  }
}

std::vector<double> OneHotEncoder::encode(const std::string& value) const {
  std::vector<double> out(dim(), 0.0);
  auto it = index_.find(value);
  if (it != index_.end()) {
    out[it->second] = 1.0;
  } else {
    out.back() = 1.0;  // the explicit "unseen" bucket
  }
  return out;
}

}  // namespace wfa
