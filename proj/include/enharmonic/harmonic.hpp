#pragma once

#include "enharmonic/network.hpp"

namespace enharmonic {

/// Solution of the classical (linear) Dirichlet problem. omega is the current
/// 1-form c * dh with dh(e) = h(head) - h(tail).
struct HarmonicSolution {
    VertexValues h;
    EdgeValues omega;
};

/// Solves sum_{y~x} c_e (h(x)-h(y)) = 0 at interior x with h = u on the
/// boundary. Dense exact-pivoting factorization up to 500 vertices, diagonally
/// preconditioned conjugate gradients above.
HarmonicSolution solve_dirichlet(const NetworkWithBoundary& net, const BoundaryValues& u,
                                 const EdgeValues& c);

/// Conductance-to-energy map: E_e = c_e (h(x)-h(y))^2 for the solved h.
/// Entries are >= 0; zero when an edge carries no potential drop.
EdgeValues psi(const NetworkWithBoundary& net, const BoundaryValues& u, const EdgeValues& c);

/// Current 1-form of a solved problem; divergence-free at interior vertices.
EdgeValues current_flow(const NetworkWithBoundary& net, const HarmonicSolution& solution);

}  // namespace enharmonic
