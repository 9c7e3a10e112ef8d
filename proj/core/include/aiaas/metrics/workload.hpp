#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aiaas::metrics {

/// Samples of one metric on a uniform grid.
struct TimeSeries {
  std::string metric;
  std::vector<double> timestamps;  // seconds since scenario start
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Throws ValidationError unless timestamps are strictly increasing and
  /// uniformly spaced (to 1e-9 s) and match the value count.
  void validate() const;
  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

enum class SegmentShape { Constant, Ramp, Burst };

std::string_view to_string(SegmentShape shape);
SegmentShape parse_segment_shape(std::string_view text);

/// Constant and Ramp segments set the level and may not overlap each other.
/// Burst segments add a half-sine bump of height `amplitude` on top of the
/// level and may overlap anything.
struct WorkloadSegment {
  double start = 0.0;  // seconds, inclusive
  double end = 0.0;    // seconds, exclusive
  SegmentShape shape = SegmentShape::Constant;
  double amplitude = 0.0;          // level (constant), end level (ramp), peak (burst)
  std::optional<double> from;      // ramp start level; defaults to base_rate
};

struct WorkloadProfile {
  std::string name = "workload";
  double duration = 1800.0;  // seconds
  double interval = 1.0;     // seconds between samples
  double base_rate = 0.0;    // requests/s outside level segments
  std::vector<WorkloadSegment> segments;
  double noise = 0.0;        // multiplicative noise bound, |n| <= noise
  std::uint64_t seed = 0;

  /// HTTP load on the core load balancer over 30 minutes: ramps with
  /// superimposed bursts.
  static WorkloadProfile paper30min(std::uint64_t seed);
  /// Periodic (hourly triangle wave) traffic with bursts, sampled once per
  /// minute. Used by the VNF autoscaling scenario.
  static WorkloadProfile periodic_with_bursts(double hours, std::uint64_t seed);
};

/// Throws ValidationError for segments outside [0, duration], negative
/// rates, or overlapping level segments.
void validate_profile(const WorkloadProfile& profile);

/// Noise-free rate at time t.
double workload_level(const WorkloadProfile& profile, double t);

/// Samples at t = 0, interval, ... < duration. Deterministic in the seed.
TimeSeries generate_workload(const WorkloadProfile& profile);

}  // namespace aiaas::metrics
