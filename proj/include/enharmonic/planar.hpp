#pragma once

#include <array>
#include <map>

#include "enharmonic/solver.hpp"

namespace enharmonic {

/// Combinatorial embedding: counterclockwise cyclic edge order around each
/// vertex plus the boundary vertices in cyclic order on the outer face. The
/// outer face itself is inferred (it must contain every listed boundary
/// vertex). No embedding is computed from scratch; callers supply the
/// rotation system or vertex coordinates.
struct PlanarEmbedding {
    std::vector<std::vector<int>> rotation;  // per vertex: edge indices, CCW
    std::vector<VertexId> boundary;          // cyclic on the outer face
};

PlanarEmbedding embedding_from_rotation(const NetworkWithBoundary& net,
                                        const std::map<VertexId, std::vector<EdgeId>>& rotation,
                                        std::vector<VertexId> boundary = {});

/// Builds the rotation system by sorting incident edges counterclockwise by
/// angle around each vertex.
PlanarEmbedding embedding_from_coordinates(const NetworkWithBoundary& net,
                                           const std::map<VertexId, std::array<double, 2>>& pos,
                                           std::vector<VertexId> boundary = {});

/// Dual of the network with rays to infinity from each boundary vertex: one
/// dual vertex per bounded face plus one per outer arc between consecutive
/// boundary vertices. Every primal edge has a dual edge between the faces on
/// its two sides; the rays contribute |B| extra dual edges between
/// consecutive arcs.
struct DualNetwork {
    int bounded_faces = 0;
    int arc_count = 0;  // outer-arc dual vertices follow the bounded faces
    int dual_vertex_count() const { return bounded_faces + arc_count; }

    std::vector<int> left_face;   // per primal edge, dual vertex left of tail->head
    std::vector<int> right_face;  // per primal edge, dual vertex right of tail->head
    std::vector<std::array<int, 2>> arc_endpoints;  // per arc: {start, end} boundary vertex
    std::vector<std::array<int, 2>> ray_edges;      // consecutive arc pairs

    /// Arc whose endpoints are boundary vertices a and b (in either order).
    int arc_between(int a, int b) const;
    /// Arc that starts at boundary vertex b on the clockwise outer walk.
    int arc_starting_at(int b) const;
};

DualNetwork build_dual(const NetworkWithBoundary& net, const PlanarEmbedding& embedding);

/// Values on dual vertices with (g(right) - g(left)) * (h(head) - h(tail))
/// = E_e on every primal edge. Anchored to zero at `anchor` when given,
/// otherwise at the arc immediately clockwise from the minimum-value fixed
/// boundary vertex.
struct ConjugateFunction {
    std::vector<double> g;  // per dual vertex
    int anchor = 0;
};

ConjugateFunction conjugate(const NetworkWithBoundary& net, const DualNetwork& dual,
                            const ConstraintSet& constraints, const EdgeValues& energies,
                            const VertexValues& h, int anchor = -1);

/// Axis-aligned rectangle per edge: y-span the endpoint values of h, x-span
/// the conjugate values on the two sides. Rectangle areas are the edge
/// energies; the diagram tiles [0,W] x [min u, max u].
struct SmithRect {
    EdgeId edge;
    double x0, y0, x1, y1;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

struct SmithDiagram {
    std::vector<SmithRect> rects;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // bounding rectangle
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

SmithDiagram smith_diagram(const NetworkWithBoundary& net, const PlanarEmbedding& embedding,
                           const EnharmonicSolution& solution);

/// Rectangle list exactly tiling a bounding rectangle.
struct RectTiling {
    struct Tile {
        std::string id;
        double x0, y0, x1, y1;
    };
    double x0, y0, x1, y1;
    std::vector<Tile> tiles;
};

RectTiling tiling_of(const SmithDiagram& diagram);

enum class CrossPointPolicy {
    Reject,          // error on four rectangles meeting at a point
    KeepHorizontal,  // the horizontal segments through a cross stay joined
    SplitHorizontal, // the horizontal segments split at the cross
};

/// Network of a tiling: one vertex per maximal horizontal segment, one edge
/// per tile from its top segment to its bottom segment (sigma downhill),
/// energies the tile areas, boundary the full bottom and top segments.
struct TilingNetwork {
    NetworkWithBoundary net;
    PlanarEmbedding embedding;
    BoundaryValues u;
    Orientation sigma;
    EnergyAssignment energies;
};

TilingNetwork tiling_to_network(const RectTiling& tiling,
                                CrossPointPolicy policy = CrossPointPolicy::Reject);

/// Isotopic retiling with prescribed tile areas (keyed by tile id). The
/// vertical extent of the input is kept; the width becomes sum(areas)/height.
SmithDiagram retile_with_areas(const RectTiling& tiling,
                               const std::map<std::string, double>& areas,
                               CrossPointPolicy policy = CrossPointPolicy::Reject);

/// Canonical description of which tiles meet along each maximal horizontal
/// segment; two tilings are network-isotopic iff their signatures agree.
std::string tiling_adjacency_signature(const RectTiling& tiling,
                                       CrossPointPolicy policy = CrossPointPolicy::Reject);

struct SvgOptions {
    bool scale_to_unit_square = false;
    bool labels = false;
    double pixel_size = 600.0;
};

/// Deterministic SVG 1.1 document, one rect per tile, y axis flipped so that
/// larger values are up.
std::string render_svg(const SmithDiagram& diagram, const SvgOptions& options = {});

}  // namespace enharmonic
