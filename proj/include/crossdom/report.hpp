#pragma once

#include <string>

#include "json.hpp"

namespace crossdom {

// Deterministic JSON serialization: object keys sorted, floats printed
// with 17 significant digits so doubles survive a round-trip bit-exactly.
std::string canonical_dump(const nlohmann::json& value);

// "%.17g" rendering used everywhere canonical numbers are emitted.
std::string format_double(double value);

// Fixed three-decimal rendering for human-facing tables.
std::string format_score(double value);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace crossdom
