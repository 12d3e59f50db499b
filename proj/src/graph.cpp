#include "holant/graph.hpp"

#include "holant/errors.hpp"

#include <algorithm>
#include <deque>

namespace holant {

Graph::Graph(int n)
{
    if (n < 0)
        throw InvalidArgument("negative vertex count");
    incident_.resize(n);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n)
{
    for (auto [u, v] : edges)
        add_edge(u, v);
}

void Graph::check_vertex(int v) const
{
    if (v < 0 || v >= n())
        throw InvalidArgument("vertex " + std::to_string(v) + " out of range 0.." + std::to_string(n() - 1));
}

int Graph::add_edge(int u, int v)
{
    check_vertex(u);
    check_vertex(v);
    if (u == v)
        throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    auto key = std::minmax(u, v);
    if (index_.count(key))
        throw InvalidArgument("parallel edge " + std::to_string(u) + "-" + std::to_string(v));
    const int e = m();
    edges_.emplace_back(u, v);
    index_.emplace(key, e);
    incident_[u].push_back(e);
    incident_[v].push_back(e);
    return e;
}

std::vector<int> Graph::neighbors(int v) const
{
    std::vector<int> out;
    for (int e : incident_[v])
        out.push_back(other(e, v));
    std::sort(out.begin(), out.end());
    return out;
}

int Graph::max_degree() const
{
    int d = 0;
    for (const auto& inc : incident_)
        d = std::max(d, static_cast<int>(inc.size()));
    return d;
}

int Graph::edge_id(int u, int v) const
{
    auto it = index_.find(std::minmax(u, v));
    return it == index_.end() ? -1 : it->second;
}

Graph Graph::induced(std::span<const int> vertices) const
{
    std::vector<int> vs(vertices.begin(), vertices.end());
    std::sort(vs.begin(), vs.end());
    std::vector<int> local(n(), -1);
    for (std::size_t i = 0; i < vs.size(); ++i)
        local[vs[i]] = static_cast<int>(i);
    Graph h(static_cast<int>(vs.size()));
    for (auto [u, v] : edges_)
        if (local[u] >= 0 && local[v] >= 0)
            h.add_edge(local[u], local[v]);
    return h;
}

bool Graph::is_connected() const
{
    if (n() == 0)
        return true;
    std::vector<char> seen(n(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int e : incident_[v]) {
            int w = other(e, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n();
}

HolantInstance::HolantInstance(Graph graph, int q, std::vector<SymmetricFunction> functions)
    : graph_(std::move(graph)), q_(q), functions_(std::move(functions))
{
    if (q_ < 2)
        throw InvalidArgument("domain size must be at least 2");
    if (static_cast<int>(functions_.size()) != graph_.n())
        throw InvalidArgument("expected " + std::to_string(graph_.n()) + " vertex functions, got "
                              + std::to_string(functions_.size()));
    for (int v = 0; v < graph_.n(); ++v) {
        if (functions_[v].q() != q_)
            throw InvalidArgument("vertex " + std::to_string(v) + ": function domain "
                                  + std::to_string(functions_[v].q()) + " differs from q = " + std::to_string(q_));
        if (functions_[v].arity() != graph_.degree(v))
            throw InvalidArgument("vertex " + std::to_string(v) + ": function arity "
                                  + std::to_string(functions_[v].arity()) + " differs from degree "
                                  + std::to_string(graph_.degree(v)));
    }
}

Composition HolantInstance::local_composition(int v, std::span<const int> config) const
{
    Composition c = Composition::zero(q_);
    for (int e : graph_.incident(v))
        ++c.counts[config[e]];
    return c;
}

Value HolantInstance::weight(std::span<const int> config) const
{
    if (static_cast<int>(config.size()) != graph_.m())
        throw InvalidArgument("configuration length differs from edge count");
    for (int x : config)
        if (x < 0 || x >= q_)
            throw InvalidArgument("configuration value out of range");
    Value w(1);
    for (int v = 0; v < graph_.n(); ++v) {
        const Value& f = functions_[v](local_composition(v, config));
        if (f.is_zero())
            return Value(0);
        w *= f;
    }
    return w;
}

HolantInstance incidence_transform(int q, const Graph& graph, const SymmetricFunction& edge_function,
                                   const SymmetricFunction& vertex_function)
{
    if (edge_function.q() != q || edge_function.arity() != 2)
        throw InvalidArgument("incidence_transform: edge function must be binary over q = " + std::to_string(q));
    if (vertex_function.q() != q || vertex_function.arity() != 1)
        throw InvalidArgument("incidence_transform: vertex function must be unary over q = " + std::to_string(q));
    const int n = graph.n();
    Graph h(n + graph.m());
    for (int e = 0; e < graph.m(); ++e) {
        h.add_edge(graph.edge(e).first, n + e);
        h.add_edge(graph.edge(e).second, n + e);
    }
    BuiltinParams p;
    for (int i = 0; i < q; ++i) {
        Composition c = Composition::zero(q);
        c.counts[i] = 1;
        p.weights.push_back(vertex_function(c));
    }
    std::vector<SymmetricFunction> fs;
    fs.reserve(h.n());
    for (int v = 0; v < n; ++v)
        fs.push_back(builtin(BuiltinKind::equality, q, graph.degree(v), p));
    for (int e = 0; e < graph.m(); ++e)
        fs.push_back(edge_function);
    return HolantInstance(std::move(h), q, std::move(fs));
}

std::vector<int> vertex_boundary(const Graph& graph, std::span<const int> U)
{
    std::vector<char> in(graph.n(), 0), out(graph.n(), 0);
    for (int v : U)
        in[v] = 1;
    for (int v : U)
        for (int e : graph.incident(v)) {
            int w = graph.other(e, v);
            if (!in[w])
                out[w] = 1;
        }
    std::vector<int> b;
    for (int v = 0; v < graph.n(); ++v)
        if (out[v])
            b.push_back(v);
    return b;
}

namespace {

std::vector<int> line_distances(const Graph& graph, int e)
{
    if (e < 0 || e >= graph.m())
        throw InvalidArgument("edge " + std::to_string(e) + " out of range");
    std::vector<int> dist(graph.m(), -1);
    std::vector<char> vseen(graph.n(), 0);
    std::deque<int> queue{e};
    dist[e] = 0;
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        for (int v : {graph.edge(f).first, graph.edge(f).second}) {
            // Each endpoint's incident list is scanned once, from the first
            // edge that reaches it, which has the least distance.
            if (vseen[v])
                continue;
            vseen[v] = 1;
            for (int g : graph.incident(v))
                if (dist[g] < 0) {
                    dist[g] = dist[f] + 1;
                    queue.push_back(g);
                }
        }
    }
    return dist;
}

} // namespace

EdgeBall edge_ball(const Graph& graph, int e, int r)
{
    if (r < 0)
        throw InvalidArgument("negative radius");
    const auto dist = line_distances(graph, e);
    EdgeBall ball;
    for (int f = 0; f < graph.m(); ++f)
        if (dist[f] >= 0 && dist[f] <= r)
            ball.inner.push_back(f);
        else if (dist[f] == r + 1)
            ball.boundary.push_back(f);
    return ball;
}

int edge_eccentricity(const Graph& graph, int e)
{
    const auto dist = line_distances(graph, e);
    return *std::max_element(dist.begin(), dist.end());
}

SubInstance restrict_instance(const HolantInstance& instance, const PartialConfiguration& fixed,
                              std::span<const int> keep)
{
    const Graph& g = instance.graph();
    const int q = instance.q();
    std::vector<char> kept(g.m(), 0);
    for (int e : keep) {
        if (e < 0 || e >= g.m())
            throw InvalidArgument("restrict_instance: edge " + std::to_string(e) + " out of range");
        if (fixed.count(e))
            throw InvalidArgument("restrict_instance: edge " + std::to_string(e) + " is both fixed and kept");
        kept[e] = 1;
    }
    for (auto [e, x] : fixed) {
        if (e < 0 || e >= g.m())
            throw InvalidArgument("restrict_instance: fixed edge " + std::to_string(e) + " out of range");
        if (x < 0 || x >= q)
            throw InvalidArgument("restrict_instance: fixed value out of range");
    }

    std::vector<int> local_of(g.n(), -1);
    std::vector<int> vmap;
    Value scalar(1);
    std::vector<SymmetricFunction> fs;
    for (int v = 0; v < g.n(); ++v) {
        Composition kappa = Composition::zero(q);
        bool has_kept = false, has_free = false;
        for (int e : g.incident(v)) {
            if (kept[e])
                has_kept = true;
            else if (auto it = fixed.find(e); it != fixed.end())
                ++kappa.counts[it->second];
            else
                has_free = true;
        }
        if (has_kept && has_free)
            throw InvalidArgument("restrict_instance: vertex " + std::to_string(v)
                                  + " has a kept edge and an edge that is neither kept nor fixed");
        if (has_kept) {
            local_of[v] = static_cast<int>(vmap.size());
            vmap.push_back(v);
            fs.push_back(pin(instance.function(v), kappa));
        } else if (!has_free) {
            scalar *= instance.function(v)(kappa);
        }
    }
    Graph h(static_cast<int>(vmap.size()));
    std::vector<int> emap;
    for (int e = 0; e < g.m(); ++e)
        if (kept[e]) {
            h.add_edge(local_of[g.edge(e).first], local_of[g.edge(e).second]);
            emap.push_back(e);
        }
    return SubInstance{HolantInstance(std::move(h), q, std::move(fs)), std::move(vmap), std::move(emap),
                       std::move(scalar)};
}

} // namespace holant
