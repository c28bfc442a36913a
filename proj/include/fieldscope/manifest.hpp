#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace fieldscope {

// Reproducibility sidecar written next to every command's outputs. Reruns
// with identical inputs and seed produce byte-identical machine outputs;
// only the timestamp and timings fields vary.
struct RunManifest {
  std::string command;
  std::string tool_version;
  nlohmann::json config;  // resolved flag values
  std::map<std::string, std::string> input_digests;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> timings_ms;

  void add_input(const std::string& path);  // records fnv1a64 content digest
  nlohmann::json to_json() const;
  void save_file(const std::string& path) const;
};

}  // namespace fieldscope
