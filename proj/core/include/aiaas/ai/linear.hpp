#pragma once

#include <span>
#include <vector>

namespace aiaas::ai {

struct LinearModel {
  double slope = 0.0;
  double intercept = 0.0;
  double fit_mse = 0.0;  // mean squared residual on the fitting data
};

/// Ordinary least squares y = slope * x + intercept. Throws ValidationError
/// for fewer than two points, mismatched lengths, or constant x.
LinearModel linfit(std::span<const double> x, std::span<const double> y);

double lin_predict(const LinearModel& model, double x);

/// Mean squared residual of an arbitrary line on (x, y).
double line_mse(double slope, double intercept, std::span<const double> x, std::span<const double> y);

}  // namespace aiaas::ai
