#include "aiaas/sdi/resources.hpp"

#include <cmath>

namespace aiaas::sdi {

ResourceVector& ResourceVector::operator+=(const ResourceVector& o) {
  cpu += o.cpu;
  mem += o.mem;
  storage += o.storage;
  bandwidth += o.bandwidth;
  return *this;
}

ResourceVector& ResourceVector::operator-=(const ResourceVector& o) {
  cpu -= o.cpu;
  mem -= o.mem;
  storage -= o.storage;
  bandwidth -= o.bandwidth;
  return *this;
}

bool ResourceVector::non_negative() const {
  return cpu >= 0 && mem >= 0 && storage >= 0 && bandwidth >= 0;
}

bool ResourceVector::fits_within(const ResourceVector& capacity) const {
  return !first_exceeding(capacity).has_value();
}

std::optional<std::string_view> ResourceVector::first_exceeding(
    const ResourceVector& capacity) const {
  if (cpu > capacity.cpu) return "cpu";
  if (mem > capacity.mem) return "mem";
  if (storage > capacity.storage) return "storage";
  if (bandwidth > capacity.bandwidth) return "bandwidth";
  return std::nullopt;
}

ResourceVector ResourceVector::scaled(double factor) const {
  auto s = [factor](std::int64_t v) {
    return static_cast<std::int64_t>(std::llround(static_cast<double>(v) * factor));
  };
  return {s(cpu), s(mem), s(storage), s(bandwidth)};
}

std::ostream& operator<<(std::ostream& os, const ResourceVector& r) {
  return os << "{cpu=" << r.cpu << "mc, mem=" << r.mem << "MiB, storage=" << r.storage
            << "MiB, bw=" << r.bandwidth << "Mb/s}";
}

}  // namespace aiaas::sdi
