#pragma once

#include <string>

#include <json.hpp>

namespace plurex {

// Structural validator for the schema subset used by the emitted reports:
// type / properties / required / items / enum. Returns true when the
// document conforms; on failure fills `error` with the offending path.
bool validate_schema(const nlohmann::json& doc, const nlohmann::json& schema, std::string* error);

}  // namespace plurex
