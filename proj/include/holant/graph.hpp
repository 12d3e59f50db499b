#pragma once

#include "holant/symfun.hpp"

#include <map>
#include <span>
#include <utility>
#include <vector>

namespace holant {

/// Simple undirected graph with stable edge ids 0..m-1.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    /// Returns the new edge id. Loops and parallel edges are rejected.
    int add_edge(int u, int v);

    int n() const { return static_cast<int>(incident_.size()); }
    int m() const { return static_cast<int>(edges_.size()); }

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::pair<int, int>& edge(int e) const { return edges_[e]; }
    const std::vector<int>& incident(int v) const { return incident_[v]; }
    int degree(int v) const { return static_cast<int>(incident_[v].size()); }
    int other(int e, int v) const { return edges_[e].first == v ? edges_[e].second : edges_[e].first; }
    std::vector<int> neighbors(int v) const;
    int max_degree() const;

    /// Edge id joining u and v, or -1.
    int edge_id(int u, int v) const;

    /// G[U]: vertices renumbered in increasing order of `vertices`.
    Graph induced(std::span<const int> vertices) const;

    bool is_connected() const;

private:
    void check_vertex(int v) const;

    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> incident_;
    std::map<std::pair<int, int>, int> index_;
};

/// Edge id -> value. Also the growing pin set of self-reduction.
using PartialConfiguration = std::map<int, int>;

/// A graph with one symmetric function per vertex, arity = degree.
class HolantInstance {
public:
    HolantInstance(Graph graph, int q, std::vector<SymmetricFunction> functions);

    const Graph& graph() const { return graph_; }
    int q() const { return q_; }
    const std::vector<SymmetricFunction>& functions() const { return functions_; }
    const SymmetricFunction& function(int v) const { return functions_[v]; }

    /// Composition of the values on v's incident edges under a full configuration.
    Composition local_composition(int v, std::span<const int> config) const;

    /// w(sigma) = prod_v f_v(sigma|E(v)).
    Value weight(std::span<const int> config) const;

private:
    Graph graph_;
    int q_;
    std::vector<SymmetricFunction> functions_;
};

/// H(W, F) cut out of a parent instance. hol(parent restricted) equals
/// `scalar * hol(local)`.
struct SubInstance {
    HolantInstance local;
    std::vector<int> vertex_map;  // local vertex -> parent vertex
    std::vector<int> edge_map;    // local edge -> parent edge
    Value scalar{1};
};

/// Spin system to Holant on the incidence graph. Original vertex v keeps
/// index v and carries a deg(v)-ary equality weighted by `vertex_function`;
/// edge e becomes vertex n+e carrying `edge_function`.
HolantInstance incidence_transform(int q, const Graph& graph, const SymmetricFunction& edge_function,
                                   const SymmetricFunction& vertex_function);

/// {u not in U : u adjacent to some vertex of U}, sorted.
std::vector<int> vertex_boundary(const Graph& graph, std::span<const int> U);

struct EdgeBall {
    std::vector<int> inner;     // N_r(e)
    std::vector<int> boundary;  // B_r(e)
};

/// Balls in the line-graph metric: edges sharing an endpoint are at distance 1.
EdgeBall edge_ball(const Graph& graph, int e, int r);

/// Largest line-graph distance from e to an edge reachable from it.
int edge_eccentricity(const Graph& graph, int e);

/// Keeps the edges in `keep` and pins every vertex that touches them by the
/// fixed values of its other edges. Vertices with no kept edge whose edges are
/// all fixed contribute their pinned value to `scalar`; vertices with no kept
/// edge and some free edge are dropped.
SubInstance restrict_instance(const HolantInstance& instance, const PartialConfiguration& fixed,
                              std::span<const int> keep);

} // namespace holant
