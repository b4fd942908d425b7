#pragma once

#include <optional>

#include "enharmonic/types.hpp"

namespace enharmonic {

/// Finite connected multigraph with a designated ordered boundary vertex set.
/// Parallel edges are allowed, self-loops are not. The constructor enforces
/// structural sanity (unique ids, known endpoints, no self-loops, boundary a
/// subset of the vertices); the semantic invariants (connectivity, every edge
/// on a simple path between two boundary vertices) are checked by
/// validate_network, which reports instead of throwing.
class NetworkWithBoundary {
  public:
    struct IncidentEdge {
        int edge;     // edge index
        int other;    // opposite endpoint, vertex index
        bool at_tail; // true when this vertex is the stored tail
    };

    NetworkWithBoundary(std::vector<VertexId> vertices, std::vector<EdgeDef> edges,
                        std::vector<VertexId> boundary);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int interior_count() const { return vertex_count() - boundary_count(); }
    int boundary_count() const { return static_cast<int>(boundary_.size()); }

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<EdgeDef>& edges() const { return edges_; }
    const std::vector<VertexId>& boundary() const { return boundary_; }
    const std::vector<int>& boundary_indices() const { return boundary_indices_; }

    int vertex_index(const VertexId& id) const;
    int edge_index(const EdgeId& id) const;
    bool is_boundary(int v) const { return boundary_mask_[v]; }

    int tail(int e) const { return tail_[e]; }
    int head(int e) const { return head_[e]; }
    const std::vector<IncidentEdge>& incident(int v) const { return incident_[v]; }

    /// Dense conversion helpers between id-keyed maps and index vectors.
    EdgeValues edge_values(const std::map<EdgeId, double>& m) const;
    std::map<EdgeId, double> edge_map(const EdgeValues& v) const;
    std::map<VertexId, double> vertex_map(const VertexValues& v) const;
    Orientation orientation_from_map(const std::map<EdgeId, int>& m) const;
    std::map<EdgeId, int> orientation_map(const Orientation& sigma) const;

  private:
    std::vector<VertexId> vertices_;
    std::vector<EdgeDef> edges_;
    std::vector<VertexId> boundary_;
    std::vector<int> boundary_indices_;
    std::vector<bool> boundary_mask_;
    std::vector<int> tail_, head_;
    std::vector<std::vector<IncidentEdge>> incident_;
    std::map<VertexId, int> vertex_index_;
    std::map<EdgeId, int> edge_index_;
};

struct ValidationIssue {
    std::string what;
    std::optional<EdgeId> edge; // set when a specific edge is at fault
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
};

/// Checks connectivity, |B| >= 2, and that every edge lies on a simple path
/// between two distinct boundary vertices (via vertex-capacity max-flow).
ValidationReport validate_network(const NetworkWithBoundary& net);

/// sigma(e) = sgn(h(tail) - h(head)). Throws ZeroDifference when some edge
/// has equal endpoint values.
Orientation orientation_from_function(const NetworkWithBoundary& net, const VertexValues& h);

/// True iff sigma is acyclic, every interior vertex has an in- and an
/// out-edge, and there is no directed path b1 ~> b2 between boundary
/// vertices with u(b1) <= u(b2).
bool is_compatible(const NetworkWithBoundary& net, const BoundaryValues& u, const Orientation& sigma);

/// All compatible orientations, in lexicographic order of the sign vector
/// over edges in index order (-1 before +1). Throws TooLarge when the edge
/// count exceeds cap.
std::vector<Orientation> enumerate_compatible_orientations(const NetworkWithBoundary& net,
                                                           const BoundaryValues& u, int cap = 24);

}  // namespace enharmonic
