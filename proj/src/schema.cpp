#include "plurex/schema.hpp"

namespace plurex {

namespace {

bool type_matches(const nlohmann::json& doc, const std::string& type) {
  if (type == "object") return doc.is_object();
  if (type == "array") return doc.is_array();
  if (type == "string") return doc.is_string();
  if (type == "boolean") return doc.is_boolean();
  if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
  if (type == "number") return doc.is_number();
  if (type == "null") return doc.is_null();
  return false;
}

bool validate_at(const nlohmann::json& doc, const nlohmann::json& schema, const std::string& path,
                 std::string* error) {
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_array()) {
      for (const auto& alt : t) ok = ok || type_matches(doc, alt.get<std::string>());
    } else {
      ok = type_matches(doc, t.get<std::string>());
    }
    if (!ok) {
      if (error) *error = path + ": type mismatch (expected " + t.dump() + ")";
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema.at("enum")) ok = ok || v == doc;
    if (!ok) {
      if (error) *error = path + ": value not in enum";
      return false;
    }
  }
  if (doc.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!doc.contains(key.get<std::string>())) {
          if (error) *error = path + ": missing required key " + key.get<std::string>();
          return false;
        }
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema.at("properties").items()) {
        if (!doc.contains(key)) continue;
        if (!validate_at(doc.at(key), sub, path + "/" + key, error)) return false;
      }
    }
  }
  if (doc.is_array() && schema.contains("items")) {
    int i = 0;
    for (const auto& item : doc) {
      if (!validate_at(item, schema.at("items"), path + "/" + std::to_string(i), error))
        return false;
      ++i;
    }
  }
  return true;
}

}  // namespace

bool validate_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                     std::string* error) {
  return validate_at(doc, schema, "$", error);
}

}  // namespace plurex
