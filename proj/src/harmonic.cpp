#include "enharmonic/harmonic.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <cmath>

namespace enharmonic {

namespace {
constexpr int kDenseLimit = 500;
}

HarmonicSolution solve_dirichlet(const NetworkWithBoundary& net, const BoundaryValues& u,
                                 const EdgeValues& c) {
    const int n = net.vertex_count();
    for (int e = 0; e < net.edge_count(); ++e)
        if (!(c[e] > 0.0))
            throw Error("NonPositive", "conductance on edge '" + net.edges()[e].id +
                                           "' must be positive");

    // Free = interior vertices; boundary rows are eliminated into the rhs.
    std::vector<int> free_of(n, -1);
    std::vector<int> free_list;
    for (int v = 0; v < n; ++v)
        if (!net.is_boundary(v)) {
            free_of[v] = static_cast<int>(free_list.size());
            free_list.push_back(v);
        }
    const int k = static_cast<int>(free_list.size());

    VertexValues h(n, 0.0);
    for (int b : net.boundary_indices()) {
        auto it = u.find(net.vertices()[b]);
        if (it == u.end())
            throw Error("MissingBoundaryValue",
                        "no value for boundary vertex '" + net.vertices()[b] + "'");
        h[b] = it->second;
    }

    if (k > 0) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
        if (k <= kDenseLimit) {
            Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k, k);
            for (int e = 0; e < net.edge_count(); ++e) {
                int a = net.tail(e), b = net.head(e);
                int fa = free_of[a], fb = free_of[b];
                if (fa >= 0) lap(fa, fa) += c[e];
                if (fb >= 0) lap(fb, fb) += c[e];
                if (fa >= 0 && fb >= 0) {
                    lap(fa, fb) -= c[e];
                    lap(fb, fa) -= c[e];
                } else if (fa >= 0) {
                    rhs(fa) += c[e] * h[b];
                } else if (fb >= 0) {
                    rhs(fb) += c[e] * h[a];
                }
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(lap);
            if (!lu.isInvertible()) throw Error("SingularSystem", "Dirichlet matrix is singular");
            Eigen::VectorXd x = lu.solve(rhs);
            for (int i = 0; i < k; ++i) h[free_list[i]] = x(i);
        } else {
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(4 * net.edge_count());
            for (int e = 0; e < net.edge_count(); ++e) {
                int a = net.tail(e), b = net.head(e);
                int fa = free_of[a], fb = free_of[b];
                if (fa >= 0) trip.emplace_back(fa, fa, c[e]);
                if (fb >= 0) trip.emplace_back(fb, fb, c[e]);
                if (fa >= 0 && fb >= 0) {
                    trip.emplace_back(fa, fb, -c[e]);
                    trip.emplace_back(fb, fa, -c[e]);
                } else if (fa >= 0) {
                    rhs(fa) += c[e] * h[b];
                } else if (fb >= 0) {
                    rhs(fb) += c[e] * h[a];
                }
            }
            Eigen::SparseMatrix<double> lap(k, k);
            lap.setFromTriplets(trip.begin(), trip.end());
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>>
                cg;
            cg.setTolerance(1e-14);
            cg.setMaxIterations(40 * k);
            cg.compute(lap);
            Eigen::VectorXd x = cg.solve(rhs);
            if (cg.info() != Eigen::Success && cg.error() > 1e-10)
                throw Error("SingularSystem", "conjugate gradient failed to converge");
            for (int i = 0; i < k; ++i) h[free_list[i]] = x(i);
        }
    }

    HarmonicSolution sol;
    sol.h = std::move(h);
    sol.omega.resize(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e)
        sol.omega[e] = c[e] * (sol.h[net.head(e)] - sol.h[net.tail(e)]);
    return sol;
}

EdgeValues psi(const NetworkWithBoundary& net, const BoundaryValues& u, const EdgeValues& c) {
    HarmonicSolution sol = solve_dirichlet(net, u, c);
    EdgeValues energies(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        double dh = sol.h[net.head(e)] - sol.h[net.tail(e)];
        energies[e] = c[e] * dh * dh;
    }
    return energies;
}

EdgeValues current_flow(const NetworkWithBoundary& net, const HarmonicSolution& solution) {
    (void)net;
    return solution.omega;
}

}  // namespace enharmonic
