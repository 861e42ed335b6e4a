#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace plurex {

// One certified constraint: margin > 0 means the worst sampled point sits
// strictly inside the constraint, worst_t is where the margin is attained.
struct ConstraintEntry {
  std::string constraint_id;
  double margin = 0.0;
  double worst_t = 0.0;
  bool pass = false;
};

struct ConstraintReport {
  std::vector<ConstraintEntry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  double min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) m = std::min(m, e.margin);
    return m;
  }

  const ConstraintEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.constraint_id == id) return &e;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& e : entries) {
      items.push_back({{"constraint_id", e.constraint_id},
                       {"margin", e.margin},
                       {"worst_t", e.worst_t},
                       {"pass", e.pass}});
    }
    return items;
  }
};

}  // namespace plurex
