#pragma once

// Independent reference computations used across the test suites. Nothing
// here calls the solvers under test.

#include "holant/graph.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using holant::Graph;
using holant::HolantInstance;
using holant::Value;

// Calls fn on every assignment in [q]^len (odometer order).
inline void for_each_assignment(int q, int len, const std::function<void(const std::vector<int>&)>& fn)
{
    std::vector<int> a(len, 0);
    while (true) {
        fn(a);
        int i = 0;
        while (i < len && ++a[i] == q)
            a[i++] = 0;
        if (i == len)
            return;
    }
}

// Sum over edge assignments of the product of vertex functions, evaluated
// from explicit tuples.
inline Value hol(const HolantInstance& inst)
{
    const Graph& g = inst.graph();
    Value total(0);
    for_each_assignment(inst.q(), g.m(), [&](const std::vector<int>& a) {
        Value w(1);
        for (int v = 0; v < g.n() && !w.is_zero(); ++v) {
            std::vector<int> t;
            for (int e : g.incident(v))
                t.push_back(a[e]);
            w *= inst.function(v).eval_tuple(t);
        }
        total += w;
    });
    return total;
}

// Spin-system partition function sum_sigma prod_edges phi_e prod_vertices phi_v.
inline Value spin_partition(const Graph& g, int q, const std::function<Value(int, int)>& edge,
                            const std::function<Value(int)>& vertex)
{
    Value total(0);
    for_each_assignment(q, g.n(), [&](const std::vector<int>& s) {
        Value w(1);
        for (auto [u, v] : g.edges())
            w *= edge(s[u], s[v]);
        for (int v = 0; v < g.n(); ++v)
            w *= vertex(s[v]);
        total += w;
    });
    return total;
}

inline Graph path(int n)
{
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}

inline Graph cycle(int n)
{
    Graph g = path(n);
    g.add_edge(n - 1, 0);
    return g;
}

inline Graph complete(int n)
{
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g.add_edge(i, j);
    return g;
}

inline Graph grid(int rows, int cols)
{
    Graph g(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols)
                g.add_edge(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows)
                g.add_edge(r * cols + c, (r + 1) * cols + c);
        }
    return g;
}

inline Graph random_graph(int n, int max_edges, std::mt19937& rng)
{
    Graph g(n);
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            all.emplace_back(i, j);
    std::shuffle(all.begin(), all.end(), rng);
    const int m = std::uniform_int_distribution<int>(0, std::min<int>(max_edges, all.size()))(rng);
    for (int i = 0; i < m; ++i)
        g.add_edge(all[i].first, all[i].second);
    return g;
}

// Every graph on n labelled vertices, as edge-subset masks over pairs i<j.
inline std::vector<Graph> all_graphs(int n)
{
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pairs.emplace_back(i, j);
    std::vector<Graph> out;
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
        Graph g(n);
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (mask >> k & 1u)
                g.add_edge(pairs[k].first, pairs[k].second);
        out.push_back(std::move(g));
    }
    return out;
}


inline holant::Value small_rational(std::mt19937& rng, bool allow_zero = true)
{
    std::uniform_int_distribution<long> num(allow_zero ? 0 : 1, 5), den(1, 3);
    return holant::Value(holant::Rational(num(rng), den(rng)));
}

// A random builtin of the given arity with small rational parameters.
inline holant::SymmetricFunction random_builtin(int q, int d, std::mt19937& rng)
{
    using holant::BuiltinKind;
    holant::BuiltinParams p;
    switch (rng() % 6) {
    case 0:
        for (int i = 0; i < q; ++i)
            p.weights.push_back(small_rational(rng, false));
        return holant::builtin(BuiltinKind::equality, q, d, p);
    case 1:
        return holant::builtin(BuiltinKind::at_most_one, q, d, p);
    case 2:
        return holant::builtin(BuiltinKind::exact_one, q, d, p);
    case 3:
    case 4: {
        p.period = 2 + static_cast<int>(rng() % 2);
        int count = 1;
        for (int i = 1; i < q; ++i)
            count *= p.period;
        for (int i = 0; i < count; ++i)
            p.residue_values.push_back(small_rational(rng));
        if (rng() % 2 == 0)
            return holant::builtin(BuiltinKind::cyclic, q, d, p);
        p.exception_span = 1;
        holant::ExtremeOverride o;
        o.color = static_cast<int>(rng() % q);
        o.rest.assign(q - 1, 0);
        o.value = small_rational(rng);
        p.overrides.push_back(o);
        return holant::builtin(BuiltinKind::cyclic_with_exceptions, q, d, p);
    }
    default:
        for (std::uint64_t i = 0; i < holant::composition_count(q, d); ++i)
            p.table.push_back(small_rational(rng));
        return holant::builtin(BuiltinKind::explicit_table, q, d, p);
    }
}

inline HolantInstance random_instance(int n, int max_m, int q, std::mt19937& rng)
{
    Graph g = random_graph(n, max_m, rng);
    std::vector<holant::SymmetricFunction> fs;
    for (int v = 0; v < n; ++v)
        fs.push_back(random_builtin(q, g.degree(v), rng));
    return HolantInstance(std::move(g), q, std::move(fs));
}

// Conditional edge marginal P(sigma_e = . | cond) by enumeration; empty when
// cond has zero mass.
inline std::vector<holant::Rational> gibbs_marginal(const HolantInstance& inst, int e,
                                                    const holant::PartialConfiguration& cond)
{
    std::vector<Value> mass(inst.q(), Value(0));
    for_each_assignment(inst.q(), inst.graph().m(), [&](const std::vector<int>& a) {
        for (auto [f, x] : cond)
            if (a[f] != x)
                return;
        mass[a[e]] += inst.weight(a);
    });
    Value z(0);
    for (const Value& v : mass)
        z += v;
    std::vector<holant::Rational> p;
    if (z.is_zero())
        return p;
    for (const Value& v : mass)
        p.push_back(v.re() / z.re());
    return p;
}

// Whether some configuration agreeing with `partial` has nonzero weight.
inline bool extendable(const HolantInstance& inst, const holant::PartialConfiguration& partial)
{
    bool found = false;
    for_each_assignment(inst.q(), inst.graph().m(), [&](const std::vector<int>& a) {
        if (found)
            return;
        for (auto [f, x] : partial)
            if (a[f] != x)
                return;
        found = !inst.weight(a).is_zero();
    });
    return found;
}

// Ferromagnetic Potts on the incidence graph: lambda on equal endpoints.
inline HolantInstance potts(const Graph& g, int q, const Value& lambda)
{
    std::vector<Value> t;
    for (const auto& c : holant::all_compositions(q, 2))
        t.push_back(*std::max_element(c.counts.begin(), c.counts.end()) == 2 ? lambda : Value(1));
    return holant::incidence_transform(q, g, holant::SymmetricFunction(q, 2, t),
                                       holant::SymmetricFunction::constant(q, 1, Value(1)));
}

// sum over X subset of E of lambda^|X| mu^#odd(X), by subset enumeration.
inline Value subgraph_sum(const Graph& g, const Value& lambda, const Value& mu)
{
    Value total(0);
    for (unsigned mask = 0; mask < (1u << g.m()); ++mask) {
        std::vector<int> deg(g.n(), 0);
        Value w(1);
        for (int e = 0; e < g.m(); ++e)
            if (mask >> e & 1u) {
                ++deg[g.edge(e).first];
                ++deg[g.edge(e).second];
                w *= lambda;
            }
        for (int d : deg)
            if (d % 2)
                w *= mu;
        total += w;
    }
    return total;
}

// Ising over spins +-1 with a = e^beta, b = e^B given exactly:
// sum_sigma prod_edges a^(s_u s_v) prod_v b^(s_v).
inline Value ising_spin(const Graph& g, const Value& a, const Value& b)
{
    const Value ia = Value(1) / a, ib = Value(1) / b;
    return spin_partition(
        g, 2, [&](int x, int y) { return x == y ? a : ia; }, [&](int x) { return x ? b : ib; });
}

// Weighted matchings: sum over matchings M of prod_{e in M} w_e.
inline Value matching_sum(const Graph& g, const std::vector<Value>& w)
{
    Value total(0);
    for (unsigned mask = 0; mask < (1u << g.m()); ++mask) {
        std::vector<int> deg(g.n(), 0);
        Value x(1);
        bool ok = true;
        for (int e = 0; e < g.m() && ok; ++e)
            if (mask >> e & 1u) {
                ok = ++deg[g.edge(e).first] == 1 && ++deg[g.edge(e).second] == 1;
                x *= w[e];
            }
        if (ok)
            total += x;
    }
    return total;
}

} // namespace oracle
