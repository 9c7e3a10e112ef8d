#include "aiaas/ai/error_distribution.hpp"

#include <cmath>

#include "aiaas/common/error.hpp"

namespace aiaas::ai {

ErrorDistribution relative_error_distribution(const metrics::TimeSeries& real, const metrics::TimeSeries& recon,
                                              double threshold, const ErrorDistributionOptions& options) {
  if (real.size() != recon.size()) {
    throw ValidationError("error distribution: length mismatch (" + std::to_string(real.size()) + " vs " +
                          std::to_string(recon.size()) + ")");
  }
  if (options.hist_bins == 0 || !(options.hist_max > options.hist_min)) {
    throw ValidationError("error distribution: bad histogram range");
  }
  ErrorDistribution out;
  Histogram& h = out.histogram;
  h.counts.assign(options.hist_bins, 0);
  const double width = (options.hist_max - options.hist_min) / static_cast<double>(options.hist_bins);
  for (std::size_t b = 0; b <= options.hist_bins; ++b) {
    h.edges.push_back(options.hist_min + width * static_cast<double>(b));
  }

  std::size_t below = 0;
  for (std::size_t i = 0; i < real.size(); ++i) {
    const double r = real.values[i];
    if (std::abs(r) < options.epsilon) {
      ++out.excluded;
      continue;
    }
    const double eta = (r - recon.values[i]) / r;
    out.eta.push_back(eta);
    if (std::abs(eta) < threshold) ++below;
    if (eta < options.hist_min) {
      ++h.underflow;
    } else if (eta >= options.hist_max) {
      ++h.overflow;
    } else {
      auto bin = static_cast<std::size_t>((eta - options.hist_min) / width);
      if (bin >= options.hist_bins) bin = options.hist_bins - 1;
      ++h.counts[bin];
    }
  }
  out.included = out.eta.size();
  out.fraction_below = out.included == 0 ? 0.0 : static_cast<double>(below) / static_cast<double>(out.included);
  return out;
}

}  // namespace aiaas::ai
