#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "polattn/scenario.hpp"

namespace polattn {

inline constexpr int kSchemaVersion = 1;

// Parses and validates a scenario document. Errors are ValidationError with
// "line L: <json pointer>: message" when the offending value can be located.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

// Canonical JSON (sorted keys, shortest round-trip numbers).
std::string dump_scenario(const Scenario& scenario, int indent = 2);

// FNV-1a 64 over the compact canonical document, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace polattn
