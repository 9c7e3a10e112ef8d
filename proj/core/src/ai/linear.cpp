#include "aiaas/ai/linear.hpp"

#include <cmath>

#include "aiaas/common/error.hpp"

namespace aiaas::ai {

LinearModel linfit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("linfit: x and y lengths differ");
  if (x.size() < 2) throw ValidationError("linfit: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  // Centered sums avoid cancellation for data far from the origin.
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("linfit: x is constant (degenerate fit)");
  LinearModel m;
  m.slope = sxy / sxx;
  m.intercept = my - m.slope * mx;
  m.fit_mse = line_mse(m.slope, m.intercept, x, y);
  return m;
}

double lin_predict(const LinearModel& model, double x) { return model.slope * x + model.intercept; }

double line_mse(double slope, double intercept, std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    sum += r * r;
  }
  return x.empty() ? 0.0 : sum / static_cast<double>(x.size());
}

}  // namespace aiaas::ai
