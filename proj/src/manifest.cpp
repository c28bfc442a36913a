#include "fieldscope/manifest.hpp"

#include <ctime>
#include <fstream>

#include "fieldscope/error.hpp"
#include "fieldscope/hash.hpp"

namespace fieldscope {

void RunManifest::add_input(const std::string& path) {
  input_digests[path] = "fnv1a64:" + hex64(file_digest(path));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json doc;
  doc["command"] = command;
  doc["tool_version"] = tool_version;
  doc["config"] = config;
  doc["input_digests"] = input_digests;
  if (seed) doc["seed"] = *seed;
  doc["timings_ms"] = timings_ms;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);
  doc["created_at"] = stamp;
  return doc;
}

void RunManifest::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest '" + path + "'");
  out << to_json().dump(2) << '\n';
}

}  // namespace fieldscope
