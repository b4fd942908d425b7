#pragma once

#include <Eigen/Dense>
#include <optional>

#include "enharmonic/network.hpp"

namespace enharmonic {

/// Generalized Dirichlet data: a subset of vertices with fixed values; every
/// other vertex is a free unknown of the maximization. Defaults to the
/// network boundary with values u; grid problems with free boundary arcs use
/// a larger free set.
class ConstraintSet {
  public:
    ConstraintSet(const NetworkWithBoundary& net, std::vector<int> fixed_vertices,
                  std::vector<double> fixed_values);

    static ConstraintSet dirichlet(const NetworkWithBoundary& net, const BoundaryValues& u);

    const std::vector<int>& fixed() const { return fixed_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<int>& free_vertices() const { return free_; }
    bool is_fixed(int v) const { return fixed_mask_[v]; }
    double fixed_value(int v) const;
    double value_spread() const { return spread_; }

    /// Writes the fixed values into h (h must have vertex_count entries).
    void apply(VertexValues& h) const;

  private:
    std::vector<int> fixed_;
    std::vector<double> values_;
    std::vector<int> free_;
    std::vector<bool> fixed_mask_;
    std::vector<double> value_of_;
    double spread_ = 0.0;
};

struct EnharmonicSolution {
    VertexValues h;
    Orientation sigma;
    EdgeValues energies;
    EdgeValues conductances;  // E_e / (h(x)-h(y))^2
    double log_objective = 0.0;
    double residual_norm = 0.0;  // infinity norm over free vertices
    int iterations = 0;
};

struct SolveOptions {
    int max_iterations = 200;
    double tolerance_scale = 1e-10;  // residual tol = scale * sum(E) / value spread
    int enumeration_cap = 24;
    int threads = 1;
    std::optional<VertexValues> start;  // must already induce sigma
};

/// sum_e E_e log|h(x)-h(y)|. Throws ZeroDifference on a collapsed edge.
double log_objective(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                     const EdgeValues& energies, const VertexValues& h);

/// Component at free vertex x: Lh(x) = sum_{y~x} E_xy / (h(x)-h(y)); equals
/// the gradient of log_objective in the free coordinates. Ordered as
/// constraints.free_vertices().
std::vector<double> residual(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                             const EdgeValues& energies, const VertexValues& h);

/// Second derivative of log_objective in the free coordinates: the weighted
/// Laplacian with edge weights -E_e/(dh_e)^2. Exposed for verification.
Eigen::MatrixXd hessian(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                        const EdgeValues& energies, const VertexValues& h);

/// A point strictly inside the polytope of functions inducing sigma: fixed
/// values exact, every edge drop at least a positive margin. Solves the
/// max-margin program exactly by longest-path scheduling on the orientation
/// DAG. Throws Infeasible when sigma is incompatible with the constraints.
VertexValues initial_point(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                           const Orientation& sigma);

/// Damped Newton maximization of log_objective over the polytope of sigma.
EnharmonicSolution solve_enharmonic(const NetworkWithBoundary& net,
                                    const ConstraintSet& constraints, const EdgeValues& energies,
                                    const Orientation& sigma, const SolveOptions& options = {});

/// One solution per compatible orientation, sorted by the orientation's sign
/// vector (-1 before +1 in edge index order).
std::vector<EnharmonicSolution> solve_all(const NetworkWithBoundary& net, const BoundaryValues& u,
                                          const EdgeValues& energies,
                                          const SolveOptions& options = {});

/// c_e = E_e / (h(x)-h(y))^2.
EdgeValues conductances_of(const NetworkWithBoundary& net, const EdgeValues& energies,
                           const VertexValues& h);

}  // namespace enharmonic
