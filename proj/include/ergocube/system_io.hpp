#pragma once

// Finite-system documents:
//   {"n": 4, "weights": ["1/4", ...], "S": [1, 2, 3, 0], "T": [...]}
// Unknown fields are ignored on read, so annotated files (for example the
// factor map written by `extend`) load as plain systems.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ergocube/finite.hpp"

namespace ergocube {

/// Throws ValidationError naming the violated field or invariant.
FiniteMPS system_from_json(const nlohmann::json& doc);
nlohmann::json system_to_json(const FiniteMPS& sys);

FiniteMPS read_system(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it into place.
void write_text_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace ergocube
