#include "deeptraj/dataset.hpp"

#include <cmath>
#include <unordered_set>

#include "deeptraj/error.hpp"

namespace deeptraj {

void TrajectoryDataset::validate() const {
  require(subject_ids.size() == values.rows(), ErrorKind::SizeMismatch,
          "subject id count does not match row count");
  require(values.all_finite(), ErrorKind::NonFiniteValue, "trajectory values must be finite");
  std::unordered_set<std::string> seen;
  for (const auto& id : subject_ids)
    require(seen.insert(id).second, ErrorKind::DuplicateId, "duplicate subject id '" + id + "'");
  if (labels)
    require(labels->size() == values.rows(), ErrorKind::SizeMismatch,
            "label count does not match row count");
}

TrajectoryDataset make_dataset(Matrix values, std::optional<std::vector<int>> labels) {
  TrajectoryDataset ds;
  ds.subject_ids.reserve(values.rows());
  for (std::size_t i = 0; i < values.rows(); ++i) ds.subject_ids.push_back("s" + std::to_string(i));
  ds.values = std::move(values);
  ds.labels = std::move(labels);
  ds.validate();
  return ds;
}

Normalization fit_normalization(const Matrix& values) {
  Normalization norm;
  if (values.empty()) return norm;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values.values()) sum += v;
  norm.mean = sum / n;
  double ss = 0.0;
  for (double v : values.values()) ss += (v - norm.mean) * (v - norm.mean);
  const double sd = std::sqrt(ss / n);
  norm.sd = sd > 0.0 ? sd : 1.0;
  return norm;
}

Matrix normalize(const Matrix& values, const Normalization& norm) {
  Matrix out = values;
  for (double& v : out.values()) v = norm.apply(v);
  return out;
}

}  // namespace deeptraj
