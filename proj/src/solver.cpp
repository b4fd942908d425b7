#include "enharmonic/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <thread>

namespace enharmonic {

ConstraintSet::ConstraintSet(const NetworkWithBoundary& net, std::vector<int> fixed_vertices,
                             std::vector<double> fixed_values)
    : fixed_(std::move(fixed_vertices)), values_(std::move(fixed_values)) {
    if (fixed_.size() != values_.size())
        throw Error("InvalidConstraints", "fixed vertex and value counts differ");
    if (fixed_.empty()) throw Error("InvalidConstraints", "at least one fixed vertex required");
    fixed_mask_.assign(net.vertex_count(), false);
    value_of_.assign(net.vertex_count(), 0.0);
    for (size_t i = 0; i < fixed_.size(); ++i) {
        int v = fixed_[i];
        if (v < 0 || v >= net.vertex_count())
            throw Error("InvalidConstraints", "fixed vertex index out of range");
        if (fixed_mask_[v]) throw Error("InvalidConstraints", "vertex fixed twice");
        fixed_mask_[v] = true;
        value_of_[v] = values_[i];
    }
    for (int v = 0; v < net.vertex_count(); ++v)
        if (!fixed_mask_[v]) free_.push_back(v);
    double lo = *std::min_element(values_.begin(), values_.end());
    double hi = *std::max_element(values_.begin(), values_.end());
    spread_ = hi - lo;
}

ConstraintSet ConstraintSet::dirichlet(const NetworkWithBoundary& net, const BoundaryValues& u) {
    std::vector<int> fixed;
    std::vector<double> values;
    for (int b : net.boundary_indices()) {
        auto it = u.find(net.vertices()[b]);
        if (it == u.end())
            throw Error("MissingBoundaryValue",
                        "no value for boundary vertex '" + net.vertices()[b] + "'");
        fixed.push_back(b);
        values.push_back(it->second);
    }
    return ConstraintSet(net, std::move(fixed), std::move(values));
}

double ConstraintSet::fixed_value(int v) const {
    if (!fixed_mask_[v]) throw Error("InvalidConstraints", "vertex is not fixed");
    return value_of_[v];
}

void ConstraintSet::apply(VertexValues& h) const {
    for (size_t i = 0; i < fixed_.size(); ++i) h[fixed_[i]] = values_[i];
}

double log_objective(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                     const EdgeValues& energies, const VertexValues& h) {
    (void)constraints;
    double total = 0.0;
    for (int e = 0; e < net.edge_count(); ++e) {
        double gap = h[net.tail(e)] - h[net.head(e)];
        if (gap == 0.0)
            throw Error("ZeroDifference",
                        "edge '" + net.edges()[e].id + "' has equal endpoint values");
        total += energies[e] * std::log(std::abs(gap));
    }
    return total;
}

std::vector<double> residual(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                             const EdgeValues& energies, const VertexValues& h) {
    std::vector<double> r(constraints.free_vertices().size(), 0.0);
    for (size_t i = 0; i < constraints.free_vertices().size(); ++i) {
        int x = constraints.free_vertices()[i];
        double sum = 0.0;
        for (const auto& inc : net.incident(x)) {
            double gap = h[x] - h[inc.other];
            if (gap == 0.0)
                throw Error("ZeroDifference",
                            "edge '" + net.edges()[inc.edge].id + "' has equal endpoint values");
            sum += energies[inc.edge] / gap;
        }
        r[i] = sum;
    }
    return r;
}

Eigen::MatrixXd hessian(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                        const EdgeValues& energies, const VertexValues& h) {
    const auto& free = constraints.free_vertices();
    std::vector<int> free_of(net.vertex_count(), -1);
    for (size_t i = 0; i < free.size(); ++i) free_of[free[i]] = static_cast<int>(i);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(free.size(), free.size());
    for (int e = 0; e < net.edge_count(); ++e) {
        double gap = h[net.tail(e)] - h[net.head(e)];
        if (gap == 0.0)
            throw Error("ZeroDifference",
                        "edge '" + net.edges()[e].id + "' has equal endpoint values");
        double w = energies[e] / (gap * gap);
        int fa = free_of[net.tail(e)], fb = free_of[net.head(e)];
        if (fa >= 0) hess(fa, fa) -= w;
        if (fb >= 0) hess(fb, fb) -= w;
        if (fa >= 0 && fb >= 0) {
            hess(fa, fb) += w;
            hess(fb, fa) += w;
        }
    }
    return hess;
}

namespace {

struct OrientedDag {
    std::vector<std::vector<int>> out;  // successor vertices
    std::vector<std::vector<int>> in;
    std::vector<int> topo;  // topological order, sources first
    bool acyclic = true;
};

OrientedDag oriented_dag(const NetworkWithBoundary& net, const Orientation& sigma) {
    OrientedDag dag;
    const int n = net.vertex_count();
    dag.out.assign(n, {});
    dag.in.assign(n, {});
    std::vector<int> indeg(n, 0);
    for (int e = 0; e < net.edge_count(); ++e) {
        int a = sigma[e] > 0 ? net.tail(e) : net.head(e);
        int b = sigma[e] > 0 ? net.head(e) : net.tail(e);
        dag.out[a].push_back(b);
        dag.in[b].push_back(a);
        indeg[b] += 1;
    }
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        dag.topo.push_back(v);
        for (int w : dag.out[v])
            if (--indeg[w] == 0) queue.push_back(w);
    }
    dag.acyclic = static_cast<int>(dag.topo.size()) == n;
    return dag;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Longest directed path length (in edges) from `source` to every vertex;
// -1 marks unreachable.
std::vector<long long> longest_from(const OrientedDag& dag, int source) {
    std::vector<long long> dist(dag.out.size(), -1);
    dist[source] = 0;
    for (int v : dag.topo) {
        if (dist[v] < 0) continue;
        for (int w : dag.out[v]) dist[w] = std::max(dist[w], dist[v] + 1);
    }
    return dist;
}

std::vector<long long> longest_to(const OrientedDag& dag, int target) {
    std::vector<long long> dist(dag.out.size(), -1);
    dist[target] = 0;
    for (auto it = dag.topo.rbegin(); it != dag.topo.rend(); ++it) {
        int v = *it;
        if (dist[v] < 0) continue;
        for (int w : dag.in[v]) dist[w] = std::max(dist[w], dist[v] + 1);
    }
    return dist;
}

}  // namespace

VertexValues initial_point(const NetworkWithBoundary& net, const ConstraintSet& constraints,
                           const Orientation& sigma) {
    if (static_cast<int>(sigma.size()) != net.edge_count())
        throw Error("InvalidOrientation", "orientation size does not match edge count");
    OrientedDag dag = oriented_dag(net, sigma);
    if (!dag.acyclic) throw Error("Infeasible", "orientation has a directed cycle");

    const int n = net.vertex_count();
    const auto& fixed = constraints.fixed();
    const auto& values = constraints.values();

    std::vector<std::vector<long long>> down(fixed.size());  // from fixed f forward
    std::vector<std::vector<long long>> up(fixed.size());    // to fixed f backward
    for (size_t i = 0; i < fixed.size(); ++i) {
        down[i] = longest_from(dag, fixed[i]);
        up[i] = longest_to(dag, fixed[i]);
    }

    // Every free vertex must lie on a directed path between two fixed
    // vertices, otherwise the maximization is unbounded there.
    for (int v : constraints.free_vertices()) {
        bool from_fixed = false, to_fixed = false;
        for (size_t i = 0; i < fixed.size(); ++i) {
            from_fixed = from_fixed || down[i][v] > 0;
            to_fixed = to_fixed || up[i][v] > 0;
        }
        if (!from_fixed || !to_fixed)
            throw Error("Infeasible", "free vertex '" + net.vertices()[v] +
                                          "' is not on a directed path between fixed vertices");
    }

    // Max-margin value: t* = min over directed fixed pairs of
    // (value gap) / (longest path length).
    double t_star = kInf;
    for (size_t i = 0; i < fixed.size(); ++i)
        for (size_t j = 0; j < fixed.size(); ++j) {
            if (i == j) continue;
            long long len = down[i][fixed[j]];
            if (len > 0) t_star = std::min(t_star, (values[i] - values[j]) / double(len));
        }
    if (!(t_star > 0.0) || t_star == kInf)
        throw Error("Infeasible", "orientation admits no function with the fixed values");

    // Earliest/latest schedules at half margin; their midpoint is feasible
    // with every edge drop >= t.
    const double t = 0.5 * t_star;
    VertexValues late(n, kInf), early(n, -kInf);
    for (size_t i = 0; i < fixed.size(); ++i) {
        for (int v = 0; v < n; ++v) {
            if (down[i][v] >= 0) late[v] = std::min(late[v], values[i] - t * double(down[i][v]));
            if (up[i][v] >= 0) early[v] = std::max(early[v], values[i] + t * double(up[i][v]));
        }
    }
    VertexValues h(n);
    for (int v = 0; v < n; ++v) h[v] = 0.5 * (early[v] + late[v]);
    constraints.apply(h);
    return h;
}

namespace {

double residual_inf_norm(const std::vector<double>& r) {
    double norm = 0.0;
    for (double x : r) norm = std::max(norm, std::abs(x));
    return norm;
}

// Newton direction for maximizing log_objective: solves (-H) delta = r with
// -H the positive definite weighted Laplacian on the free vertices.
class NewtonSystem {
  public:
    NewtonSystem(const NetworkWithBoundary& net, const ConstraintSet& constraints)
        : net_(net), free_(constraints.free_vertices()), free_of_(net.vertex_count(), -1) {
        for (size_t i = 0; i < free_.size(); ++i) free_of_[free_[i]] = static_cast<int>(i);
        dense_ = static_cast<int>(free_.size()) <= 500;
        if (!dense_) {
            // Fix the sparsity pattern once; values are refreshed per step.
            std::vector<Eigen::Triplet<double>> trip;
            for (int e = 0; e < net.edge_count(); ++e) {
                int fa = free_of_[net.tail(e)], fb = free_of_[net.head(e)];
                if (fa >= 0) trip.emplace_back(fa, fa, 1.0);
                if (fb >= 0) trip.emplace_back(fb, fb, 1.0);
                if (fa >= 0 && fb >= 0) {
                    trip.emplace_back(fa, fb, -1.0);
                    trip.emplace_back(fb, fa, -1.0);
                }
            }
            sparse_.resize(free_.size(), free_.size());
            sparse_.setFromTriplets(trip.begin(), trip.end());
            ldlt_.analyzePattern(sparse_);
        }
    }

    Eigen::VectorXd solve(const EdgeValues& energies, const VertexValues& h,
                          const std::vector<double>& r) {
        const int k = static_cast<int>(free_.size());
        Eigen::VectorXd rhs(k);
        for (int i = 0; i < k; ++i) rhs(i) = r[i];
        if (dense_) {
            Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k, k);
            accumulate(energies, h, [&](int i, int j, double w) { lap(i, j) += w; });
            return lap.ldlt().solve(rhs);
        }
        for (int i = 0; i < sparse_.outerSize(); ++i)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sparse_, i); it; ++it)
                it.valueRef() = 0.0;
        accumulate(energies, h, [&](int i, int j, double w) { sparse_.coeffRef(i, j) += w; });
        ldlt_.factorize(sparse_);
        if (ldlt_.info() != Eigen::Success)
            throw Error("SingularSystem", "Newton system factorization failed");
        return ldlt_.solve(rhs);
    }

  private:
    template <typename Add>
    void accumulate(const EdgeValues& energies, const VertexValues& h, Add add) {
        for (int e = 0; e < net_.edge_count(); ++e) {
            double gap = h[net_.tail(e)] - h[net_.head(e)];
            double w = energies[e] / (gap * gap);
            int fa = free_of_[net_.tail(e)], fb = free_of_[net_.head(e)];
            if (fa >= 0) add(fa, fa, w);
            if (fb >= 0) add(fb, fb, w);
            if (fa >= 0 && fb >= 0) {
                add(fa, fb, -w);
                add(fb, fa, -w);
            }
        }
    }

    const NetworkWithBoundary& net_;
    const std::vector<int>& free_;
    std::vector<int> free_of_;
    bool dense_ = true;
    Eigen::SparseMatrix<double> sparse_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

}  // namespace

EnharmonicSolution solve_enharmonic(const NetworkWithBoundary& net,
                                    const ConstraintSet& constraints, const EdgeValues& energies,
                                    const Orientation& sigma, const SolveOptions& options) {
    const int m = net.edge_count();
    if (static_cast<int>(energies.size()) != m)
        throw Error("IncompleteAssignment", "one energy per edge required");
    double energy_total = 0.0;
    for (int e = 0; e < m; ++e) {
        if (!(energies[e] > 0.0))
            throw Error("NonPositive",
                        "energy on edge '" + net.edges()[e].id + "' must be positive");
        energy_total += energies[e];
    }
    if (!(constraints.value_spread() > 0.0))
        throw Error("DegenerateBoundary", "fixed values have zero spread");

    VertexValues h;
    if (options.start) {
        h = *options.start;
        if (static_cast<int>(h.size()) != net.vertex_count())
            throw Error("BadStart", "start vector has wrong size");
        for (size_t i = 0; i < constraints.fixed().size(); ++i)
            if (h[constraints.fixed()[i]] != constraints.values()[i])
                throw Error("BadStart", "start does not satisfy the fixed values");
        for (int e = 0; e < m; ++e) {
            double gap = h[net.tail(e)] - h[net.head(e)];
            if (!(sigma[e] * gap > 0.0))
                throw Error("BadStart", "start does not induce the requested orientation");
        }
    } else {
        h = initial_point(net, constraints, sigma);
    }

    const double tol = options.tolerance_scale * energy_total / constraints.value_spread();
    const auto& free = constraints.free_vertices();
    NewtonSystem newton(net, constraints);

    double log_m = log_objective(net, constraints, energies, h);
    double res_norm = 0.0;
    int iter = 0;
    bool converged = free.empty();
    std::vector<double> r;

    while (!converged && iter < options.max_iterations) {
        r = residual(net, constraints, energies, h);
        res_norm = residual_inf_norm(r);
        if (res_norm <= tol) {
            converged = true;
            break;
        }
        ++iter;
        Eigen::VectorXd delta = newton.solve(energies, h, r);

        // Cap the step at 0.9 of the distance to the polytope boundary along
        // the direction, preserving the sign of every edge drop.
        double step_max = kInf;
        std::vector<double> dfull(net.vertex_count(), 0.0);
        for (size_t i = 0; i < free.size(); ++i) dfull[free[i]] = delta(static_cast<int>(i));
        for (int e = 0; e < m; ++e) {
            double gap = h[net.tail(e)] - h[net.head(e)];
            double dgap = dfull[net.tail(e)] - dfull[net.head(e)];
            if (sigma[e] * dgap < 0.0) step_max = std::min(step_max, -gap / dgap);
        }
        double step = std::min(1.0, 0.9 * step_max);

        // Backtrack until the objective increases.
        bool moved = false;
        VertexValues trial(net.vertex_count());
        for (int bt = 0; bt < 60; ++bt) {
            for (int v = 0; v < net.vertex_count(); ++v) trial[v] = h[v] + step * dfull[v];
            constraints.apply(trial);
            double log_trial = log_objective(net, constraints, energies, trial);
            if (log_trial > log_m) {
                h = trial;
                log_m = log_trial;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;  // at the numerical floor of the objective
    }

    r = residual(net, constraints, energies, h);
    res_norm = residual_inf_norm(r);
    if (res_norm > tol)
        throw Error("NoConvergence", "residual " + std::to_string(res_norm) + " above tolerance " +
                                         std::to_string(tol) + " after " + std::to_string(iter) +
                                         " iterations");

    EnharmonicSolution sol;
    sol.h = std::move(h);
    sol.sigma = sigma;
    sol.energies = energies;
    sol.conductances = conductances_of(net, energies, sol.h);
    sol.log_objective = log_m;
    sol.residual_norm = res_norm;
    sol.iterations = iter;
    return sol;
}

std::vector<EnharmonicSolution> solve_all(const NetworkWithBoundary& net, const BoundaryValues& u,
                                          const EdgeValues& energies, const SolveOptions& options) {
    std::vector<Orientation> sigmas =
        enumerate_compatible_orientations(net, u, options.enumeration_cap);
    std::sort(sigmas.begin(), sigmas.end());
    ConstraintSet constraints = ConstraintSet::dirichlet(net, u);

    std::vector<EnharmonicSolution> out(sigmas.size());
    std::vector<std::string> failures(sigmas.size());
    int threads = std::max(1, options.threads);
    if (threads == 1 || sigmas.size() <= 1) {
        for (size_t i = 0; i < sigmas.size(); ++i)
            out[i] = solve_enharmonic(net, constraints, energies, sigmas[i], options);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < sigmas.size(); i = next.fetch_add(1)) {
                try {
                    out[i] = solve_enharmonic(net, constraints, energies, sigmas[i], options);
                } catch (const std::exception& err) {
                    failures[i] = err.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min<int>(threads, static_cast<int>(sigmas.size())); ++t)
            pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        for (const auto& message : failures)
            if (!message.empty()) throw Error("NoConvergence", message);
    }
    return out;
}

EdgeValues conductances_of(const NetworkWithBoundary& net, const EdgeValues& energies,
                           const VertexValues& h) {
    EdgeValues c(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        double gap = h[net.tail(e)] - h[net.head(e)];
        if (gap == 0.0)
            throw Error("ZeroDifference",
                        "edge '" + net.edges()[e].id + "' has equal endpoint values");
        c[e] = energies[e] / (gap * gap);
    }
    return c;
}

}  // namespace enharmonic
