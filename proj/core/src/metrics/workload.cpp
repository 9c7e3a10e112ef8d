#include "aiaas/metrics/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aiaas/common/error.hpp"
#include "aiaas/common/random.hpp"

namespace aiaas::metrics {

void TimeSeries::validate() const {
  if (timestamps.size() != values.size()) {
    throw ValidationError("time series '" + metric + "': timestamp/value count mismatch");
  }
  if (timestamps.size() < 2) return;
  const double step = timestamps[1] - timestamps[0];
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    const double d = timestamps[i] - timestamps[i - 1];
    if (!(d > 0.0)) throw ValidationError("time series '" + metric + "': timestamps not increasing");
    if (std::abs(d - step) > 1e-9) throw ValidationError("time series '" + metric + "': non-uniform interval");
  }
}

std::string_view to_string(SegmentShape shape) {
  switch (shape) {
    case SegmentShape::Constant: return "constant";
    case SegmentShape::Ramp: return "ramp";
    case SegmentShape::Burst: return "burst";
  }
  return "constant";
}

SegmentShape parse_segment_shape(std::string_view text) {
  if (text == "constant") return SegmentShape::Constant;
  if (text == "ramp") return SegmentShape::Ramp;
  if (text == "burst") return SegmentShape::Burst;
  throw ValidationError("unknown segment shape '" + std::string(text) + "'");
}

WorkloadProfile WorkloadProfile::paper30min(std::uint64_t seed) {
  WorkloadProfile p;
  p.name = "paper30min";
  p.duration = 1800.0;
  p.interval = 1.0;
  p.base_rate = 40.0;
  p.noise = 0.05;
  p.seed = seed;
  using S = SegmentShape;
  p.segments = {
      {0, 300, S::Ramp, 80, 20.0},     {300, 600, S::Constant, 80, {}},
      {600, 900, S::Ramp, 50, 80.0},   {700, 760, S::Burst, 60, {}},
      {900, 1200, S::Constant, 60, {}}, {1000, 1060, S::Burst, 40, {}},
      {1200, 1500, S::Ramp, 110, 60.0}, {1500, 1800, S::Ramp, 45, 110.0},
      {1620, 1680, S::Burst, 30, {}},
  };
  return p;
}

WorkloadProfile WorkloadProfile::periodic_with_bursts(double hours, std::uint64_t seed) {
  WorkloadProfile p;
  p.name = "periodic";
  p.duration = hours * 3600.0;
  p.interval = 60.0;
  p.base_rate = 60.0;
  p.noise = 0.03;
  p.seed = seed;
  const double low = 30.0;
  const double high = 90.0;
  for (double t = 0.0; t < p.duration; t += 3600.0) {
    p.segments.push_back({t, std::min(t + 1800.0, p.duration), SegmentShape::Ramp, high, low});
    if (t + 1800.0 < p.duration) {
      p.segments.push_back({t + 1800.0, std::min(t + 3600.0, p.duration), SegmentShape::Ramp, low, high});
    }
  }
  // Roughly one unscheduled burst every 2.5 hours.
  Rng rng(seed ^ 0x6275727374ULL);
  for (double t = 0.0; t + 3600.0 < p.duration; t += 9000.0) {
    const double start =
        std::min(std::floor((t + rng.uniform(0.0, 7200.0)) / 60.0) * 60.0, p.duration - 600.0);
    p.segments.push_back({start, start + 600.0, SegmentShape::Burst, rng.uniform(15.0, 30.0), {}});
  }
  return p;
}

void validate_profile(const WorkloadProfile& p) {
  if (!(p.duration > 0.0) || !(p.interval > 0.0)) {
    throw ValidationError("workload '" + p.name + "': duration and interval must be > 0");
  }
  if (p.base_rate < 0.0 || p.noise < 0.0 || p.noise >= 1.0) {
    throw ValidationError("workload '" + p.name + "': base_rate >= 0 and noise in [0,1) required");
  }
  std::vector<const WorkloadSegment*> levels;
  for (const WorkloadSegment& s : p.segments) {
    if (s.start < 0.0 || s.end > p.duration || !(s.end > s.start)) {
      throw ValidationError("workload '" + p.name + "': segment outside [0, duration]");
    }
    if (s.amplitude < 0.0 || (s.from && *s.from < 0.0)) {
      throw ValidationError("workload '" + p.name + "': negative rate in segment");
    }
    if (s.shape != SegmentShape::Burst) levels.push_back(&s);
  }
  std::sort(levels.begin(), levels.end(),
            [](const WorkloadSegment* a, const WorkloadSegment* b) { return a->start < b->start; });
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i]->start < levels[i - 1]->end) {
      throw ValidationError("workload '" + p.name + "': overlapping level segments at t=" +
                            std::to_string(levels[i]->start));
    }
  }
}

double workload_level(const WorkloadProfile& p, double t) {
  double level = p.base_rate;
  double bursts = 0.0;
  for (const WorkloadSegment& s : p.segments) {
    if (t < s.start || t >= s.end) continue;
    const double frac = (t - s.start) / (s.end - s.start);
    switch (s.shape) {
      case SegmentShape::Constant:
        level = s.amplitude;
        break;
      case SegmentShape::Ramp: {
        const double from = s.from.value_or(p.base_rate);
        level = from + (s.amplitude - from) * frac;
        break;
      }
      case SegmentShape::Burst:
        bursts += s.amplitude * std::sin(std::numbers::pi * frac);
        break;
    }
  }
  return level + bursts;
}

TimeSeries generate_workload(const WorkloadProfile& p) {
  validate_profile(p);
  TimeSeries ts;
  ts.metric = "workload." + p.name;
  const auto n = static_cast<std::size_t>(std::ceil(p.duration / p.interval - 1e-9));
  ts.timestamps.reserve(n);
  ts.values.reserve(n);
  Rng rng(p.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * p.interval;
    double v = workload_level(p, t);
    if (p.noise > 0.0) v *= 1.0 + rng.uniform(-p.noise, p.noise);
    ts.timestamps.push_back(t);
    ts.values.push_back(std::max(0.0, v));
  }
  return ts;
}

}  // namespace aiaas::metrics
