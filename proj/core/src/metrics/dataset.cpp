#include "aiaas/metrics/dataset.hpp"

#include <cmath>

#include "aiaas/common/error.hpp"

namespace aiaas::metrics {

std::vector<std::size_t> Dataset::rows_in(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd Dataset::select(Split split) const {
  const std::vector<std::size_t> idx = rows_in(split);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), values.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

void Dataset::validate() const {
  if (static_cast<std::size_t>(values.rows()) != timestamps.size() ||
      static_cast<std::size_t>(values.cols()) != columns.size() || splits.size() != timestamps.size()) {
    throw ValidationError("dataset: inconsistent shape");
  }
  if (!values.allFinite()) throw ValidationError("dataset: non-finite entry");
}

void split_chronological(Dataset& dataset, double training_ratio) {
  if (!(training_ratio > 0.0 && training_ratio <= 1.0)) {
    throw ValidationError("training ratio must be in (0, 1]");
  }
  const auto n_train = static_cast<std::size_t>(std::floor(training_ratio * static_cast<double>(dataset.rows())));
  dataset.splits.assign(dataset.rows(), Split::Validation);
  for (std::size_t i = 0; i < n_train; ++i) dataset.splits[i] = Split::Training;
}

Scaler Scaler::fit(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw ValidationError("cannot fit a scaler on an empty dataset");
  return {rows.colwise().minCoeff().transpose(), rows.colwise().maxCoeff().transpose()};
}

double Scaler::transform_value(std::size_t c, double x) const {
  const auto i = static_cast<Eigen::Index>(c);
  const double range = max(i) - min(i);
  if (range == 0.0) return 0.5;
  return (x - min(i)) / range;
}

double Scaler::inverse_value(std::size_t c, double x01) const {
  const auto i = static_cast<Eigen::Index>(c);
  const double range = max(i) - min(i);
  if (range == 0.0) return min(i);
  return min(i) + x01 * range;
}

Eigen::MatrixXd Scaler::transform(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      out(r, c) = transform_value(static_cast<std::size_t>(c), rows(r, c));
    }
  }
  return out;
}

Eigen::MatrixXd Scaler::inverse(const Eigen::MatrixXd& rows01) const {
  Eigen::MatrixXd out(rows01.rows(), rows01.cols());
  for (Eigen::Index c = 0; c < rows01.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows01.rows(); ++r) {
      out(r, c) = inverse_value(static_cast<std::size_t>(c), rows01(r, c));
    }
  }
  return out;
}

std::pair<Dataset, Scaler> normalize_minmax(const Dataset& dataset) {
  if (dataset.rows() == 0) throw ValidationError("empty dataset");
  const Eigen::MatrixXd train = dataset.select(Split::Training);
  if (train.rows() == 0) throw ValidationError("dataset has no training rows");
  Scaler scaler = Scaler::fit(train);
  Dataset out = dataset;
  out.values = scaler.transform(dataset.values);
  return {std::move(out), std::move(scaler)};
}

Dataset denormalize(const Dataset& dataset01, const Scaler& scaler) {
  Dataset out = dataset01;
  out.values = scaler.inverse(dataset01.values);
  return out;
}

}  // namespace aiaas::metrics
