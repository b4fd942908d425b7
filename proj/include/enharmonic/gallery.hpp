#pragma once

#include <optional>

#include "enharmonic/planar.hpp"
#include "enharmonic/network.hpp"

namespace enharmonic {

/// A named example problem with its boundary data, energies, optional planar
/// embedding, and any independently known answers (with a provenance note).
struct KnownAnswer {
    std::string key;
    double value;
    std::string provenance;
};

struct Fixture {
    std::string name;
    NetworkWithBoundary net;
    BoundaryValues u;
    EnergyAssignment energies;
    std::optional<PlanarEmbedding> embedding;
    std::vector<KnownAnswer> known;

    EdgeValues energy_values() const { return net.edge_values(energies); }
};

/// Path with k edges v0 - m1 - ... - v1; boundary endpoints, u = (0,1),
/// unit energies.
Fixture make_path(int k);

/// The 4-vertex, 5-edge planar graph with two bounded faces: boundary
/// {v0,v1}, u = (0,1), unit energies. Known answers: two solutions with
/// h = 1/2 +- sqrt(5)/10 and spoke conductances (15 +- 5 sqrt(5))/2.
Fixture make_small_graph();

/// Complete graph on n+2 vertices minus the edge v0 v1; energy a on v0
/// spokes, b on v1 spokes, 2 on internal edges. The sorted interior values
/// of the increasing solution are scaled Jacobi polynomial roots.
Fixture make_jacobi(int n, double a, double b);

/// (d+1)-star with the leaves as boundary and u = anchors. Energies default
/// to 1 on every edge unless given (one per anchor, in anchor order).
Fixture make_star(int d, const std::vector<double>& anchors,
                  const std::vector<double>& energies = {});

/// [0,n]^2 grid: south/west orientation, boundary corners (0,0) and (n,n)
/// with u = 0 and 1, unit energies, embedding included.
Fixture make_grid(int n);

/// 4-cycle with two opposite boundary vertices; unit energies.
Fixture make_four_cycle();

/// Names accepted by fixture_by_name (used by the CLI gallery command).
std::vector<std::string> fixture_names();
Fixture fixture_by_name(const std::string& name);

/// Degree-12 rational polynomial whose roots give the width of one rectangle
/// in the 12-tiling family; shipped as data for user-driven residual checks.
std::vector<std::string> medium_graph_polynomial_coefficients();

}  // namespace enharmonic
