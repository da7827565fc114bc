#include "crossdom/manifest.hpp"

#include <fstream>

#include "crossdom/corpus.hpp"
#include "crossdom/report.hpp"

namespace crossdom {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string to_hex(std::uint64_t value) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for checksum: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  return "fnv1a64:" + to_hex(hash);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view component,
                          std::uint64_t index) {
  return fnv1a64(component) ^ (master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

std::string RunManifest::run_id() const {
  std::string blob = command;
  blob += '\n';
  blob += canonical_dump(config);
  blob += '\n';
  for (const auto& [path, checksum] : corpus_checksums) {
    blob += path;
    blob += '=';
    blob += checksum;
    blob += '\n';
  }
  blob += std::to_string(master_seed);
  return to_hex(fnv1a64(blob));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json obj;
  obj["command"] = command;
  obj["config"] = config;
  nlohmann::json checksums = nlohmann::json::object();
  for (const auto& [path, checksum] : corpus_checksums)
    checksums[path] = checksum;
  obj["corpus_checksums"] = std::move(checksums);
  obj["master_seed"] = master_seed;
  obj["artifacts"] = artifacts;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& [name, seconds] : step_seconds)
    steps.push_back({{"name", name}, {"seconds", seconds}});
  obj["steps"] = std::move(steps);
  obj["version"] = version;
  obj["run_id"] = run_id();
  return obj;
}

}  // namespace crossdom
