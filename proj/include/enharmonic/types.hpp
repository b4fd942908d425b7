#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace enharmonic {

using VertexId = std::string;
using EdgeId = std::string;

/// Edge with a stored reference direction (tail, head). All per-edge signs
/// in the library are relative to this stored direction.
struct EdgeDef {
    EdgeId id;
    VertexId tail;
    VertexId head;
};

/// Partial vertex map: value per boundary (or fixed) vertex id.
using BoundaryValues = std::map<VertexId, double>;
/// Per-edge maps keyed by edge id; used at the serialization boundary.
using EnergyAssignment = std::map<EdgeId, double>;
using ConductanceAssignment = std::map<EdgeId, double>;

/// Dense per-vertex / per-edge vectors indexed by network index order.
using VertexValues = std::vector<double>;
using EdgeValues = std::vector<double>;

/// Per-edge sign in {+1,-1}; +1 means "directed tail -> head", which for a
/// vertex function h corresponds to h(tail) > h(head).
using Orientation = std::vector<int>;

/// Domain error with a stable machine-readable code (e.g. "ZeroDifference",
/// "Infeasible", "NoConvergence"). The CLI maps these to exit code 1 and
/// prints the code on stderr.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

}  // namespace enharmonic
