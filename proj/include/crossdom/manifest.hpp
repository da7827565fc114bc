#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace crossdom {

inline constexpr std::string_view kVersion = "crossdom 0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

// FNV-1a over file bytes, rendered "fnv1a64:<hex>".
std::string file_checksum(const std::filesystem::path& path);

// All internal seeds derive from the master seed, a component name, and an
// index, so reruns with one flag reproduce every random choice.
std::uint64_t derive_seed(std::uint64_t master, std::string_view component,
                          std::uint64_t index);

// One manifest per command run; every report it produced references it.
struct RunManifest {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> corpus_checksums;
  std::uint64_t master_seed = 0;
  std::vector<std::string> artifacts;
  std::vector<std::pair<std::string, double>> step_seconds;
  std::string version = std::string(kVersion);

  // Stable across identical runs: hashes command, config, inputs, and seed
  // but none of the timing data.
  std::string run_id() const;
  nlohmann::json to_json() const;
};

}  // namespace crossdom
