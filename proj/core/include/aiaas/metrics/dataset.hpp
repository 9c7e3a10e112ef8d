#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace aiaas::metrics {

enum class Split { Training, Validation };

/// Rows are time, columns are metrics.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<double> timestamps;
  Eigen::MatrixXd values;      // rows() == timestamps.size(), cols() == columns.size()
  std::vector<Split> splits;   // one tag per row

  std::size_t rows() const { return timestamps.size(); }
  std::size_t width() const { return columns.size(); }
  std::vector<std::size_t> rows_in(Split split) const;
  Eigen::MatrixXd select(Split split) const;
  /// Throws ValidationError on shape mismatch or non-finite entries.
  void validate() const;
};

/// Tags the first floor(ratio * rows) rows Training and the rest Validation.
void split_chronological(Dataset& dataset, double training_ratio);

/// Per-column affine map fitted on training rows.
struct Scaler {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  /// (x - min) / (max - min); constant columns map to 0.5.
  Eigen::MatrixXd transform(const Eigen::MatrixXd& rows) const;
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& rows01) const;
  double transform_value(std::size_t column, double x) const;
  double inverse_value(std::size_t column, double x01) const;

  static Scaler fit(const Eigen::MatrixXd& rows);
};

/// Fits a scaler on the training rows and maps every row through it.
/// Throws ValidationError if there are no training rows.
std::pair<Dataset, Scaler> normalize_minmax(const Dataset& dataset);
Dataset denormalize(const Dataset& dataset01, const Scaler& scaler);

}  // namespace aiaas::metrics
