#pragma once

// Internal helpers around nlohmann::json for the structured config files.
// Not installed; public headers never expose json types.

#include <filesystem>
#include <string>
#include <string_view>

#include "aiaas/common/error.hpp"
#include "json.hpp"

namespace aiaas::detail {

using Json = nlohmann::json;

Json parse_json_text(std::string_view text, std::string_view what);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// Canonical rendering: two-space indent and a trailing newline. Object keys
/// are sorted by nlohmann::json, so equal values render identically.
std::string dump_canonical(const Json& j);

const Json& require(const Json& obj, std::string_view key, std::string_view context);

template <typename T>
T get_or(const Json& obj, std::string_view key, T fallback) {
  auto it = obj.find(std::string(key));
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("field '" + std::string(key) + "': " + e.what());
  }
}

template <typename T>
T get_required(const Json& obj, std::string_view key, std::string_view context) {
  const Json& v = require(obj, key, context);
  try {
    return v.template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(context) + "." + std::string(key) + ": " + e.what());
  }
}

}  // namespace aiaas::detail
