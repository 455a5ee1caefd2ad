#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace wfa {

// Per-dimension standardization fitted on training data only.  Constant
// dimensions get scale 1 so transform is the identity minus the mean.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  void fit(const std::vector<std::vector<double>>& x);
  std::vector<double> transform(const std::vector<double>& v) const;
  std::vector<std::vector<double>> transform_all(const std::vector<std::vector<double>>& x) const;
};

// One-hot encoding over the categories observed at fit time plus one explicit
// trailing bucket that absorbs categories unseen during training.
struct OneHotEncoder {
  std::vector<std::string> categories;

  void fit(const std::vector<std::string>& column);
  size_t dim() const { return categories.size() + 1; }
  std::vector<double> encode(const std::string& value) const;

 private:
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace wfa
