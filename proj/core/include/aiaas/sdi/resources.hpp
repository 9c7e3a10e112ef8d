#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>

namespace aiaas::sdi {

/// Integer resource quantities: millicores, MiB, MiB, Mb/s. Integers keep
/// allocate/release conservation exact.
struct ResourceVector {
  std::int64_t cpu = 0;
  std::int64_t mem = 0;
  std::int64_t storage = 0;
  std::int64_t bandwidth = 0;

  ResourceVector& operator+=(const ResourceVector& o);
  ResourceVector& operator-=(const ResourceVector& o);
  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  bool non_negative() const;
  /// Component-wise <=.
  bool fits_within(const ResourceVector& capacity) const;
  /// Name of the first component (cpu, mem, storage, bandwidth order) that
  /// exceeds `capacity`, if any.
  std::optional<std::string_view> first_exceeding(const ResourceVector& capacity) const;
  /// Each component multiplied by `factor` and rounded to nearest.
  ResourceVector scaled(double factor) const;
};

std::ostream& operator<<(std::ostream& os, const ResourceVector& r);

}  // namespace aiaas::sdi
