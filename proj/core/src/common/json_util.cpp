#include "common/json_util.hpp"

#include <fstream>
#include <sstream>

namespace aiaas::detail {

Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string(what) + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("short write to '" + path.string() + "'");
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

const Json& require(const Json& obj, std::string_view key, std::string_view context) {
  if (!obj.is_object()) throw ValidationError(std::string(context) + ": expected an object");
  auto it = obj.find(std::string(key));
  if (it == obj.end()) {
    throw ValidationError(std::string(context) + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

}  // namespace aiaas::detail
