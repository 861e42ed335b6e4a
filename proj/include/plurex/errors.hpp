#pragma once

#include <stdexcept>
#include <string>

namespace plurex {

// Error types named after the condition they signal. All carry a message
// with the offending value so failures in long sampling runs are traceable.

struct DegenerateBoundaryPoint : std::runtime_error {
  explicit DegenerateBoundaryPoint(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutsideBranchRegion : std::runtime_error {
  explicit OutsideBranchRegion(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoRepresentative : std::runtime_error {
  explicit NoRepresentative(const std::string& msg) : std::runtime_error(msg) {}
};

struct PieceMismatch : std::runtime_error {
  explicit PieceMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct StencilOutsideDomain : std::runtime_error {
  explicit StencilOutsideDomain(const std::string& msg) : std::runtime_error(msg) {}
};

struct DiscOutsideDomain : std::runtime_error {
  explicit DiscOutsideDomain(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidRange : std::runtime_error {
  explicit InvalidRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoNodesInRegion : std::runtime_error {
  explicit NoNodesInRegion(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownResult : std::runtime_error {
  explicit UnknownResult(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace plurex
