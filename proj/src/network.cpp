#include "enharmonic/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace enharmonic {

NetworkWithBoundary::NetworkWithBoundary(std::vector<VertexId> vertices, std::vector<EdgeDef> edges,
                                         std::vector<VertexId> boundary)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), boundary_(std::move(boundary)) {
    for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) {
        if (!vertex_index_.emplace(vertices_[i], i).second)
            throw Error("InvalidNetwork", "duplicate vertex id '" + vertices_[i] + "'");
    }
    tail_.reserve(edges_.size());
    head_.reserve(edges_.size());
    incident_.assign(vertices_.size(), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        const EdgeDef& def = edges_[e];
        if (!edge_index_.emplace(def.id, e).second)
            throw Error("InvalidNetwork", "duplicate edge id '" + def.id + "'");
        auto t = vertex_index_.find(def.tail);
        auto h = vertex_index_.find(def.head);
        if (t == vertex_index_.end() || h == vertex_index_.end())
            throw Error("InvalidNetwork", "edge '" + def.id + "' references an unknown vertex");
        if (t->second == h->second)
            throw Error("InvalidNetwork", "edge '" + def.id + "' is a self-loop");
        tail_.push_back(t->second);
        head_.push_back(h->second);
        incident_[t->second].push_back({e, h->second, true});
        incident_[h->second].push_back({e, t->second, false});
    }
    boundary_mask_.assign(vertices_.size(), false);
    for (const VertexId& b : boundary_) {
        auto it = vertex_index_.find(b);
        if (it == vertex_index_.end())
            throw Error("InvalidNetwork", "boundary vertex '" + b + "' is not a vertex");
        if (boundary_mask_[it->second])
            throw Error("InvalidNetwork", "boundary vertex '" + b + "' listed twice");
        boundary_mask_[it->second] = true;
        boundary_indices_.push_back(it->second);
    }
}

int NetworkWithBoundary::vertex_index(const VertexId& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) throw Error("UnknownVertex", "no vertex '" + id + "'");
    return it->second;
}

int NetworkWithBoundary::edge_index(const EdgeId& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw Error("UnknownEdge", "no edge '" + id + "'");
    return it->second;
}

EdgeValues NetworkWithBoundary::edge_values(const std::map<EdgeId, double>& m) const {
    EdgeValues out(edge_count());
    if (static_cast<int>(m.size()) != edge_count())
        throw Error("IncompleteAssignment", "expected a value for each of the " +
                                                std::to_string(edge_count()) + " edges");
    for (const auto& [id, value] : m) out[edge_index(id)] = value;
    return out;
}

std::map<EdgeId, double> NetworkWithBoundary::edge_map(const EdgeValues& v) const {
    std::map<EdgeId, double> out;
    for (int e = 0; e < edge_count(); ++e) out[edges_[e].id] = v[e];
    return out;
}

std::map<VertexId, double> NetworkWithBoundary::vertex_map(const VertexValues& v) const {
    std::map<VertexId, double> out;
    for (int i = 0; i < vertex_count(); ++i) out[vertices_[i]] = v[i];
    return out;
}

Orientation NetworkWithBoundary::orientation_from_map(const std::map<EdgeId, int>& m) const {
    Orientation out(edge_count());
    if (static_cast<int>(m.size()) != edge_count())
        throw Error("IncompleteAssignment", "orientation must assign every edge");
    for (const auto& [id, s] : m) {
        if (s != 1 && s != -1) throw Error("InvalidOrientation", "sign must be +1 or -1");
        out[edge_index(id)] = s;
    }
    return out;
}

std::map<EdgeId, int> NetworkWithBoundary::orientation_map(const Orientation& sigma) const {
    std::map<EdgeId, int> out;
    for (int e = 0; e < edge_count(); ++e) out[edges_[e].id] = sigma[e];
    return out;
}

namespace {

// Max-flow value (capped at 2) from `source_pair` = {x,y} to the boundary set
// in the vertex-split graph of net minus edge `skip`. Unit vertex capacities;
// flow 2 certifies two vertex-disjoint paths x~>B, y~>B, i.e. `skip` lies on
// a simple boundary-to-boundary path.
bool edge_on_boundary_path(const NetworkWithBoundary& net, int skip) {
    const int n = net.vertex_count();
    // Node layout: v_in = 2v, v_out = 2v+1, source = 2n, sink = 2n+1.
    const int source = 2 * n, sink = 2 * n + 1, nodes = 2 * n + 2;
    struct Arc {
        int to, cap, rev;
    };
    std::vector<std::vector<Arc>> g(nodes);
    auto add_arc = [&](int a, int b, int cap) {
        g[a].push_back({b, cap, static_cast<int>(g[b].size())});
        g[b].push_back({a, 0, static_cast<int>(g[a].size()) - 1});
    };
    for (int v = 0; v < n; ++v) add_arc(2 * v, 2 * v + 1, 1);
    for (int e = 0; e < net.edge_count(); ++e) {
        if (e == skip) continue;
        int a = net.tail(e), b = net.head(e);
        add_arc(2 * a + 1, 2 * b, 1);
        add_arc(2 * b + 1, 2 * a, 1);
    }
    add_arc(source, 2 * net.tail(skip), 1);
    add_arc(source, 2 * net.head(skip), 1);
    for (int b : net.boundary_indices()) add_arc(2 * b + 1, sink, 2);

    int flow = 0;
    while (flow < 2) {
        // BFS augmenting path.
        std::vector<int> prev_node(nodes, -1), prev_arc(nodes, -1);
        std::deque<int> queue{source};
        prev_node[source] = source;
        while (!queue.empty() && prev_node[sink] < 0) {
            int a = queue.front();
            queue.pop_front();
            for (int i = 0; i < static_cast<int>(g[a].size()); ++i) {
                const Arc& arc = g[a][i];
                if (arc.cap > 0 && prev_node[arc.to] < 0) {
                    prev_node[arc.to] = a;
                    prev_arc[arc.to] = i;
                    queue.push_back(arc.to);
                }
            }
        }
        if (prev_node[sink] < 0) break;
        for (int v = sink; v != source; v = prev_node[v]) {
            Arc& arc = g[prev_node[v]][prev_arc[v]];
            arc.cap -= 1;
            g[v][arc.rev].cap += 1;
        }
        ++flow;
    }
    return flow >= 2;
}

}  // namespace

ValidationReport validate_network(const NetworkWithBoundary& net) {
    ValidationReport report;
    auto fail = [&](std::string what, std::optional<EdgeId> edge = std::nullopt) {
        report.ok = false;
        report.issues.push_back({std::move(what), std::move(edge)});
    };

    if (net.boundary_count() < 2) fail("boundary must contain at least 2 vertices");

    if (net.vertex_count() > 0) {
        std::vector<bool> seen(net.vertex_count(), false);
        std::deque<int> queue{0};
        seen[0] = true;
        int reached = 1;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (const auto& inc : net.incident(v)) {
                if (!seen[inc.other]) {
                    seen[inc.other] = true;
                    ++reached;
                    queue.push_back(inc.other);
                }
            }
        }
        if (reached != net.vertex_count()) {
            for (int v = 0; v < net.vertex_count(); ++v)
                if (!seen[v]) {
                    fail("graph is not connected: vertex '" + net.vertices()[v] +
                         "' unreachable from '" + net.vertices()[0] + "'");
                    break;
                }
        }
    }

    if (report.ok) {
        for (int e = 0; e < net.edge_count(); ++e) {
            if (!edge_on_boundary_path(net, e))
                fail("edge '" + net.edges()[e].id +
                         "' lies on no simple path between two boundary vertices",
                     net.edges()[e].id);
        }
    }
    return report;
}

Orientation orientation_from_function(const NetworkWithBoundary& net, const VertexValues& h) {
    Orientation sigma(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) {
        double drop = h[net.tail(e)] - h[net.head(e)];
        if (drop == 0.0)
            throw Error("ZeroDifference",
                        "edge '" + net.edges()[e].id + "' has equal endpoint values");
        sigma[e] = drop > 0 ? 1 : -1;
    }
    return sigma;
}

namespace {

// Directed view of sigma: edge e runs from_(e) -> to_(e) in the direction of
// decreasing h.
inline int dir_from(const NetworkWithBoundary& net, const Orientation& s, int e) {
    return s[e] > 0 ? net.tail(e) : net.head(e);
}
inline int dir_to(const NetworkWithBoundary& net, const Orientation& s, int e) {
    return s[e] > 0 ? net.head(e) : net.tail(e);
}

struct DirectedView {
    std::vector<std::vector<int>> out;  // successor vertex lists
    std::vector<int> indegree;
    explicit DirectedView(const NetworkWithBoundary& net, const Orientation& sigma)
        : out(net.vertex_count()), indegree(net.vertex_count(), 0) {
        for (int e = 0; e < net.edge_count(); ++e) {
            int a = dir_from(net, sigma, e), b = dir_to(net, sigma, e);
            out[a].push_back(b);
            indegree[b] += 1;
        }
    }
};

bool is_acyclic(const DirectedView& dv) {
    std::vector<int> indeg = dv.indegree;
    std::deque<int> queue;
    for (int v = 0; v < static_cast<int>(indeg.size()); ++v)
        if (indeg[v] == 0) queue.push_back(v);
    int removed = 0;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        ++removed;
        for (int w : dv.out[v])
            if (--indeg[w] == 0) queue.push_back(w);
    }
    return removed == static_cast<int>(indeg.size());
}

bool compatible_indexed(const NetworkWithBoundary& net, const std::vector<double>& boundary_value,
                        const Orientation& sigma) {
    const int n = net.vertex_count();
    std::vector<int> in(n, 0), out(n, 0);
    for (int e = 0; e < net.edge_count(); ++e) {
        out[dir_from(net, sigma, e)] += 1;
        in[dir_to(net, sigma, e)] += 1;
    }
    for (int v = 0; v < n; ++v)
        if (!net.is_boundary(v) && (in[v] == 0 || out[v] == 0)) return false;

    DirectedView dv(net, sigma);
    if (!is_acyclic(dv)) return false;

    // Reachability from each boundary vertex; forbid b1 ~> b2 with
    // u(b1) <= u(b2).
    for (int b1 : net.boundary_indices()) {
        std::vector<bool> seen(n, false);
        std::deque<int> queue{b1};
        seen[b1] = true;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : dv.out[v])
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
        }
        for (int b2 : net.boundary_indices()) {
            if (b2 != b1 && seen[b2] && boundary_value[b1] <= boundary_value[b2]) return false;
        }
    }
    return true;
}

std::vector<double> boundary_value_array(const NetworkWithBoundary& net, const BoundaryValues& u) {
    std::vector<double> values(net.vertex_count(), 0.0);
    for (int b : net.boundary_indices()) {
        auto it = u.find(net.vertices()[b]);
        if (it == u.end())
            throw Error("MissingBoundaryValue",
                        "no value for boundary vertex '" + net.vertices()[b] + "'");
        values[b] = it->second;
    }
    return values;
}

}  // namespace

bool is_compatible(const NetworkWithBoundary& net, const BoundaryValues& u,
                   const Orientation& sigma) {
    if (static_cast<int>(sigma.size()) != net.edge_count())
        throw Error("InvalidOrientation", "orientation size does not match edge count");
    return compatible_indexed(net, boundary_value_array(net, u), sigma);
}

std::vector<Orientation> enumerate_compatible_orientations(const NetworkWithBoundary& net,
                                                           const BoundaryValues& u, int cap) {
    if (net.edge_count() > cap)
        throw Error("TooLarge", "edge count " + std::to_string(net.edge_count()) +
                                    " exceeds enumeration cap " + std::to_string(cap));
    std::vector<double> values = boundary_value_array(net, u);
    {
        std::set<double> distinct;
        for (int b : net.boundary_indices()) distinct.insert(values[b]);
        if (static_cast<int>(distinct.size()) != net.boundary_count())
            throw Error("DegenerateBoundary", "boundary values must be pairwise distinct");
    }

    const int n = net.vertex_count(), m = net.edge_count();
    std::vector<std::vector<int>> out(n);  // successors under partial assignment
    std::vector<int> in_deg(n, 0), out_deg(n, 0), unassigned(n, 0);
    for (int e = 0; e < m; ++e) {
        unassigned[net.tail(e)] += 1;
        unassigned[net.head(e)] += 1;
    }

    Orientation sigma(m, 0);
    std::vector<Orientation> found;

    // Reachability b ~> a in the partial digraph; used for incremental cycle
    // detection before committing edge a -> b.
    auto reaches = [&](int from, int target) {
        std::vector<bool> seen(n, false);
        std::deque<int> queue{from};
        seen[from] = true;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (v == target) return true;
            for (int w : out[v])
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
        }
        return false;
    };

    auto rec = [&](auto&& self, int e) -> void {
        if (e == m) {
            if (compatible_indexed(net, values, sigma)) found.push_back(sigma);
            return;
        }
        for (int s : {-1, 1}) {
            sigma[e] = s;
            int a = dir_from(net, sigma, e), b = dir_to(net, sigma, e);
            if (reaches(b, a)) continue;  // would close a directed cycle
            out[a].push_back(b);
            out_deg[a] += 1;
            in_deg[b] += 1;
            unassigned[a] -= 1;
            unassigned[b] -= 1;
            // Prune interior sinks/sources as soon as a vertex is fully
            // assigned.
            bool viable = true;
            for (int v : {a, b})
                if (!net.is_boundary(v) && unassigned[v] == 0 && (in_deg[v] == 0 || out_deg[v] == 0))
                    viable = false;
            if (viable) self(self, e + 1);
            out[a].pop_back();
            out_deg[a] -= 1;
            in_deg[b] -= 1;
            unassigned[a] += 1;
            unassigned[b] += 1;
        }
        sigma[e] = 0;
    };
    rec(rec, 0);
    return found;
}

}  // namespace enharmonic
