#pragma once

#include <cstddef>
#include <vector>

#include "aiaas/metrics/workload.hpp"

namespace aiaas::ai {

struct Histogram {
  std::vector<double> edges;        // bins.size() + 1 ascending edges
  std::vector<std::size_t> counts;  // [edges[i], edges[i+1])
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

struct ErrorDistributionOptions {
  /// Samples with |real| below this are excluded from eta and counted apart.
  double epsilon = 1e-6;
  double hist_min = -0.5;
  double hist_max = 0.5;
  std::size_t hist_bins = 40;
};

struct ErrorDistribution {
  std::vector<double> eta;  // (real - recon) / real for included samples
  std::size_t included = 0;
  std::size_t excluded = 0;
  double fraction_below = 0.0;  // share of included samples with |eta| < threshold
  Histogram histogram;
};

/// Relative reconstruction error per sample. Throws ValidationError when
/// the series lengths differ.
ErrorDistribution relative_error_distribution(const metrics::TimeSeries& real,
                                              const metrics::TimeSeries& recon, double threshold,
                                              const ErrorDistributionOptions& options = {});

}  // namespace aiaas::ai
