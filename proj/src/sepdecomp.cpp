#include "holant/sepdecomp.hpp"

#include "holant/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <limits>
#include <sstream>

namespace holant {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Unit vertex capacities via in/out splitting; terminals cannot be cut.
class VertexCut {
public:
    VertexCut(const Graph& g, const std::vector<char>& removed, const std::vector<char>& side)
        : n_(g.n()), head_(2 * g.n() + 2, -1)
    {
        // side: 1 = source terminal, 2 = sink terminal, 0 = cuttable.
        for (int v = 0; v < n_; ++v) {
            if (removed[v])
                continue;
            add(in(v), out(v), side[v] ? kInf : 1);
            if (side[v] == 1)
                add(source(), in(v), kInf);
            else if (side[v] == 2)
                add(out(v), sink(), kInf);
        }
        for (auto [u, v] : g.edges())
            if (!removed[u] && !removed[v]) {
                add(out(u), in(v), kInf);
                add(out(v), in(u), kInf);
            }
    }

    // Minimum cut vertices if the flow stays within `limit`.
    std::optional<std::vector<int>> run(int limit)
    {
        int flow = 0;
        while (true) {
            int got = augment();
            if (got == 0)
                break;
            if (got >= kInf)
                return std::nullopt;
            flow += got;
            if (flow > limit)
                return std::nullopt;
        }
        std::vector<char> reach(head_.size(), 0);
        std::deque<int> queue{source()};
        reach[source()] = 1;
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (int a = head_[x]; a >= 0; a = next_[a])
                if (cap_[a] > 0 && !reach[to_[a]]) {
                    reach[to_[a]] = 1;
                    queue.push_back(to_[a]);
                }
        }
        std::vector<int> cut;
        for (int v = 0; v < n_; ++v)
            if (reach[in(v)] && !reach[out(v)])
                cut.push_back(v);
        return cut;
    }

private:
    int in(int v) const { return 2 * v; }
    int out(int v) const { return 2 * v + 1; }
    int source() const { return 2 * n_; }
    int sink() const { return 2 * n_ + 1; }

    void add(int a, int b, int c)
    {
        push(a, b, c);
        push(b, a, 0);
    }
    void push(int a, int b, int c)
    {
        to_.push_back(b);
        cap_.push_back(c);
        next_.push_back(head_[a]);
        head_[a] = static_cast<int>(to_.size()) - 1;
    }

    int augment()
    {
        std::vector<int> via(head_.size(), -1);
        std::deque<int> queue{source()};
        via[source()] = -2;
        while (!queue.empty() && via[sink()] == -1) {
            int x = queue.front();
            queue.pop_front();
            for (int a = head_[x]; a >= 0; a = next_[a])
                if (cap_[a] > 0 && via[to_[a]] == -1) {
                    via[to_[a]] = a;
                    queue.push_back(to_[a]);
                }
        }
        if (via[sink()] == -1)
            return 0;
        int bottleneck = kInf;
        for (int x = sink(); x != source(); x = to_[via[x] ^ 1])
            bottleneck = std::min(bottleneck, cap_[via[x]]);
        for (int x = sink(); x != source(); x = to_[via[x] ^ 1]) {
            cap_[via[x]] -= bottleneck;
            cap_[via[x] ^ 1] += bottleneck;
        }
        return bottleneck;
    }

    int n_;
    std::vector<int> head_, to_, cap_, next_;
};

bool balanced(std::size_t x, std::size_t y, std::size_t w) { return x > 0 && y > 0 && 3 * x <= 2 * w && 3 * y <= 2 * w; }

std::vector<int> components(const Graph& g)
{
    std::vector<int> comp(g.n(), -1);
    int c = 0;
    for (int s = 0; s < g.n(); ++s) {
        if (comp[s] >= 0)
            continue;
        std::vector<int> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : g.incident(v)) {
                int w = g.other(e, v);
                if (comp[w] < 0) {
                    comp[w] = c;
                    stack.push_back(w);
                }
            }
        }
        ++c;
    }
    return comp;
}

std::optional<BalancedSeparator> component_split(const Graph& g, const std::vector<int>& W,
                                                 const SeparatorFilter& accept)
{
    const auto comp = components(g);
    std::vector<int> ids;
    for (int w : W)
        ids.push_back(comp[w]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 2 || ids.size() > 20)
        return std::nullopt;
    const std::uint32_t total = 1u << (ids.size() - 1);
    // The last group always lands in Y, so each split is seen once.
    for (std::uint32_t mask = 1; mask < total; ++mask) {
        BalancedSeparator sep;
        sep.W = W;
        for (int w : W) {
            const auto pos = std::lower_bound(ids.begin(), ids.end(), comp[w]) - ids.begin();
            (mask >> pos & 1u ? sep.X : sep.Y).push_back(w);
        }
        if (balanced(sep.X.size(), sep.Y.size(), W.size()) && (!accept || accept(sep)))
            return sep;
    }
    return std::nullopt;
}

// Calls fn on every j-subset of {0..n-1} in lexicographic order until it returns true.
bool for_each_subset(int n, int j, const std::function<bool(const std::vector<int>&)>& fn)
{
    std::vector<int> idx(j);
    for (int i = 0; i < j; ++i)
        idx[i] = i;
    while (true) {
        if (fn(idx))
            return true;
        int i = j - 1;
        while (i >= 0 && idx[i] == n - j + i)
            --i;
        if (i < 0)
            return false;
        ++idx[i];
        for (int k = i + 1; k < j; ++k)
            idx[k] = idx[k - 1] + 1;
    }
}

} // namespace

std::optional<BalancedSeparator> balanced_separator(const Graph& graph, const std::vector<int>& W_in, int s_max,
                                                    const SeparatorFilter& accept)
{
    std::vector<int> W = W_in;
    std::sort(W.begin(), W.end());
    W.erase(std::unique(W.begin(), W.end()), W.end());
    if (W.size() < 2)
        throw InvalidArgument("balanced_separator: |W| must be at least 2");
    for (int w : W)
        if (w < 0 || w >= graph.n())
            throw InvalidArgument("balanced_separator: vertex out of range");
    if (s_max < 0)
        return std::nullopt;

    if (auto sep = component_split(graph, W, accept))
        return sep;

    const int n = graph.n();
    const int wn = static_cast<int>(W.size());
    std::optional<BalancedSeparator> found;
    for (int j = 0; j <= std::min(s_max, wn - 2) && !found; ++j) {
        for_each_subset(wn, j, [&](const std::vector<int>& pick) {
            std::vector<char> removed(n, 0), in_sw(wn, 0);
            for (int i : pick) {
                removed[W[i]] = 1;
                in_sw[i] = 1;
            }
            std::vector<int> rest;
            for (int i = 0; i < wn; ++i)
                if (!in_sw[i])
                    rest.push_back(W[i]);
            const int r = static_cast<int>(rest.size());
            const std::uint64_t total = 1ull << (r - 1);
            for (std::uint64_t mask = 0; mask < total; ++mask) {
                const int xs = 1 + std::popcount(mask);
                if (!balanced(xs, r - xs, W.size()))
                    continue;
                std::vector<char> side(n, 0);
                side[rest[0]] = 1;
                for (int i = 1; i < r; ++i)
                    side[rest[i]] = (mask >> (i - 1) & 1u) ? 1 : 2;
                VertexCut flow(graph, removed, side);
                auto cut = flow.run(s_max - j);
                if (!cut)
                    continue;
                BalancedSeparator sep;
                sep.W = W;
                for (int i : pick)
                    sep.S.push_back(W[i]);
                sep.S.insert(sep.S.end(), cut->begin(), cut->end());
                std::sort(sep.S.begin(), sep.S.end());
                for (int v : rest)
                    (side[v] == 1 ? sep.X : sep.Y).push_back(v);
                if (accept && !accept(sep))
                    continue;
                found = std::move(sep);
                return true;
            }
            return false;
        });
    }
    return found;
}

// ---------------------------------------------------------------------------

int decomposition_width(const Graph& graph, const std::vector<DecompositionNode>& nodes)
{
    int w = 0;
    for (const auto& nd : nodes) {
        w = std::max(w, static_cast<int>(nd.S.size()));
        w = std::max(w, static_cast<int>(vertex_boundary(graph, nd.V).size()));
    }
    return w;
}

std::string SeparatorDecomposition::to_text() const
{
    auto set = [](const std::vector<int>& xs) {
        std::string s = "{";
        for (std::size_t i = 0; i < xs.size(); ++i)
            s += (i ? " " : "") + std::to_string(xs[i]);
        return s + "}";
    };
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        os << "node " << i << " parent " << nodes_[i].parent << " V " << set(nodes_[i].V) << " S "
           << set(nodes_[i].S) << "\n";
    os << "width " << width_ << "\n";
    return os.str();
}

namespace {

class Builder {
public:
    Builder(const Graph& g, int s) : g_(g), s_(s) {}

    std::optional<std::vector<DecompositionNode>> run()
    {
        std::vector<int> all(g_.n());
        for (int v = 0; v < g_.n(); ++v)
            all[v] = v;
        if (build(all, -1) < 0)
            return std::nullopt;
        return std::move(nodes_);
    }

private:
    int leaf(int parent)
    {
        DecompositionNode nd;
        nd.parent = parent;
        nodes_.push_back(nd);
        return static_cast<int>(nodes_.size()) - 1;
    }

    // Returns the node id or -1 when a separator search fails.
    int build(const std::vector<int>& R, int parent)
    {
        if (R.empty())
            return leaf(parent);
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[id].parent = parent;
        nodes_[id].V = R;

        std::vector<int> X, Y, S;
        if (static_cast<int>(R.size()) <= 4 * s_) {
            S = R;
        } else if (!split(R, X, Y, S)) {
            return -1;
        }
        nodes_[id].S = S;
        const int l = build(X, id);
        if (l < 0)
            return -1;
        nodes_[id].left = l;
        const int r = build(Y, id);
        if (r < 0)
            return -1;
        nodes_[id].right = r;
        return id;
    }

    bool split(const std::vector<int>& R, std::vector<int>& X, std::vector<int>& Y, std::vector<int>& S)
    {
        const int n = g_.n();
        std::vector<char> inR(n, 0), inW(n, 0);
        for (int v : R)
            inR[v] = 1;
        std::vector<int> W = vertex_boundary(g_, R);
        for (int v : W)
            inW[v] = 1;
        const std::size_t target = std::min<std::size_t>(6 * static_cast<std::size_t>(s_), n);
        for (int v : R)
            if (W.size() < target && !inW[v]) {
                W.push_back(v);
                inW[v] = 1;
            }
        for (int v = 0; v < n && W.size() < target; ++v)
            if (!inW[v]) {
                W.push_back(v);
                inW[v] = 1;
            }
        std::sort(W.begin(), W.end());
        if (W.size() < 2)
            return false;

        std::vector<char> side;
        auto sides = [&](const BalancedSeparator& sep) {
            // 1: reachable from X_W in G - S', 2: the rest of V - S', 0: S'.
            side.assign(n, 2);
            for (int v : sep.S)
                side[v] = 0;
            std::vector<int> stack;
            for (int x : sep.X) {
                side[x] = 1;
                stack.push_back(x);
            }
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int e : g_.incident(v)) {
                    int w = g_.other(e, v);
                    if (side[w] == 2) {
                        side[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
        };
        auto progress = [&](const BalancedSeparator& sep) {
            sides(sep);
            std::size_t x = 0, y = 0;
            for (int v : R) {
                if (side[v] == 1)
                    ++x;
                else if (side[v] == 2)
                    ++y;
            }
            return x < R.size() && y < R.size();
        };
        auto sep = balanced_separator(g_, W, 2 * s_, progress);
        if (!sep)
            return false;
        sides(*sep);
        for (int v : R)
            (side[v] == 0 ? S : side[v] == 1 ? X : Y).push_back(v);
        return true;
    }

    const Graph& g_;
    int s_;
    std::vector<DecompositionNode> nodes_;
};

} // namespace

std::optional<SeparatorDecomposition> build_decomposition(const Graph& graph, int s)
{
    if (s < 1)
        throw InvalidArgument("build_decomposition: s must be positive");
    auto nodes = Builder(graph, s).run();
    if (!nodes)
        return std::nullopt;
    const int w = decomposition_width(graph, *nodes);
    return SeparatorDecomposition(std::move(*nodes), w);
}

MinWidthResult find_min_width(const Graph& graph, int s_cap)
{
    if (s_cap < 1)
        throw InvalidArgument("find_min_width: s_cap must be positive");
    for (int s = 1; s <= s_cap; ++s)
        if (auto d = build_decomposition(graph, s))
            return {std::move(*d), s};
    throw ResourceExhausted("no separator decomposition found up to s = " + std::to_string(s_cap));
}

ValidationReport validate(const Graph& graph, const SeparatorDecomposition& dec)
{
    const auto& nodes = dec.nodes();
    auto fail = [](int i, std::string msg) { return ValidationReport{false, i, std::move(msg)}; };
    if (nodes.empty())
        return fail(-1, "empty tree");
    const int n = graph.n();
    const int count = static_cast<int>(nodes.size());

    auto well_formed = [&](const std::vector<int>& xs) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] < 0 || xs[i] >= n)
                return false;
            if (i && xs[i - 1] >= xs[i])
                return false;
        }
        return true;
    };

    if (static_cast<int>(nodes[0].V.size()) != n)
        return fail(0, "root does not cover all vertices");
    if (nodes[0].parent != -1)
        return fail(0, "root has a parent");

    std::vector<char> visited(count, 0);
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        if (visited[i])
            return fail(i, "node reached twice");
        visited[i] = 1;
        const auto& nd = nodes[i];
        if (!well_formed(nd.V) || !well_formed(nd.S))
            return fail(i, "vertex sets must be sorted, distinct and in range");
        if ((nd.left < 0) != (nd.right < 0))
            return fail(i, "node has exactly one child");
        if (nd.is_leaf()) {
            if (!nd.V.empty() || !nd.S.empty())
                return fail(i, "leaf with nonempty V or S");
            continue;
        }
        if (nd.left >= count || nd.right >= count || nd.left == nd.right)
            return fail(i, "bad child index");
        const auto& a = nodes[nd.left];
        const auto& b = nodes[nd.right];
        if (a.parent != i || b.parent != i)
            return fail(i, "child parent pointer mismatch");
        std::vector<int> mark(n, 0);
        for (int v : nd.V)
            mark[v] = 1;
        auto claim = [&](const std::vector<int>& xs, int tag) {
            for (int v : xs) {
                if (mark[v] != 1)
                    return false;
                mark[v] = tag;
            }
            return true;
        };
        if (!claim(nd.S, 2) || !claim(a.V, 3) || !claim(b.V, 4))
            return fail(i, "children and separator do not partition V_i");
        for (int v : nd.V)
            if (mark[v] == 1)
                return fail(i, "vertex " + std::to_string(v) + " of V_i is in neither child nor S_i");
        for (auto [u, v] : graph.edges())
            if ((mark[u] == 3 && mark[v] == 4) || (mark[u] == 4 && mark[v] == 3))
                return fail(i, "edge " + std::to_string(u) + "-" + std::to_string(v) + " joins the two children");
        if (a.V.size() >= nd.V.size() || b.V.size() >= nd.V.size())
            return fail(i, "child is not smaller than its parent");
        stack.push_back(nd.left);
        stack.push_back(nd.right);
    }
    for (int i = 0; i < count; ++i)
        if (!visited[i])
            return fail(i, "node unreachable from root");
    const int w = decomposition_width(graph, nodes);
    if (w != dec.width())
        return fail(-1, "recorded width " + std::to_string(dec.width()) + " differs from actual " + std::to_string(w));
    return {};
}

} // namespace holant
