#include "holant/exact.hpp"

#include "holant/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace holant {

int enumeration_cap_bits()
{
    if (const char* env = std::getenv("HOLANT_ENUM_CAP")) {
        try {
            int v = std::stoi(env);
            if (v > 0)
                return v;
        } catch (const std::exception&) {
        }
    }
    return 24;
}

Value brute_force_hol(const HolantInstance& inst)
{
    const Graph& g = inst.graph();
    const int q = inst.q();
    const int m = g.m();
    const double bits = m * std::log2(static_cast<double>(q));
    if (bits > enumeration_cap_bits() + 1e-9)
        throw ResourceExhausted("brute force needs " + std::to_string(q) + "^" + std::to_string(m)
                                + " configurations, above the 2^" + std::to_string(enumeration_cap_bits()) + " budget");
    std::vector<int> config(m, 0);
    std::vector<Composition> local(g.n());
    for (int v = 0; v < g.n(); ++v) {
        local[v] = Composition::zero(q);
        local[v].counts[0] = g.degree(v);
    }
    Value total(0);
    while (true) {
        Value w(1);
        for (int v = 0; v < g.n(); ++v) {
            const Value& f = inst.function(v)(local[v]);
            if (f.is_zero()) {
                w = Value(0);
                break;
            }
            w *= f;
        }
        total += w;
        int e = 0;
        for (; e < m; ++e) {
            auto [a, b] = g.edge(e);
            --local[a].counts[config[e]];
            --local[b].counts[config[e]];
            config[e] = (config[e] + 1) % q;
            ++local[a].counts[config[e]];
            ++local[b].counts[config[e]];
            if (config[e] != 0)
                break;
        }
        if (e == m)
            break;
    }
    return total;
}

// ---------------------------------------------------------------------------

const PeerTable& PeerCache::of(const SymmetricFunction& f)
{
    std::lock_guard lock(mu_);
    auto it = tables_.find(f);
    if (it == tables_.end())
        it = tables_.emplace(f, std::make_unique<PeerTable>(f)).first;
    return *it->second;
}

const PeerTable& PeerCache::of_boolean(std::uint32_t id)
{
    {
        std::lock_guard lock(mu_);
        if (auto it = booleans_.find(id); it != booleans_.end())
            return *it->second;
    }
    const PeerTable& t = of(interned(id).to_function());
    std::lock_guard lock(mu_);
    booleans_.emplace(id, &t);
    return t;
}

namespace {

// Gaussian integer accumulator. The solvers scale every function to integer
// values first, so sums need no gcd work and fresh zeros do not allocate.
struct Zi {
    mpz_class re, im;

    Zi() = default;
    explicit Zi(long v) : re(v) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }

    Zi& operator+=(const Zi& o)
    {
        re += o.re;
        if (sgn(o.im) != 0)
            im += o.im;
        return *this;
    }

    // *this += a * b
    void add_product(const Zi& a, const Zi& b)
    {
        mpz_addmul(re.get_mpz_t(), a.re.get_mpz_t(), b.re.get_mpz_t());
        if (sgn(a.im) == 0 && sgn(b.im) == 0)
            return;
        mpz_submul(re.get_mpz_t(), a.im.get_mpz_t(), b.im.get_mpz_t());
        mpz_addmul(im.get_mpz_t(), a.re.get_mpz_t(), b.im.get_mpz_t());
        mpz_addmul(im.get_mpz_t(), a.im.get_mpz_t(), b.re.get_mpz_t());
    }

    friend Zi operator*(const Zi& a, const Zi& b)
    {
        Zi r;
        r.add_product(a, b);
        return r;
    }

    static Zi of(const Value& v)
    {
        if (v.re().get_den() != 1 || v.im().get_den() != 1)
            throw std::logic_error("solver value is not integral");
        Zi z;
        z.re = v.re().get_num();
        z.im = v.im().get_num();
        return z;
    }

    Value to_value() const { return Value(Rational(re), Rational(im)); }
};

// Instance with every function multiplied by the lcm of its denominators.
struct Scaled {
    HolantInstance instance;
    Value divisor;
};

Scaled scale_to_integers(const HolantInstance& inst)
{
    std::vector<SymmetricFunction> fs;
    mpz_class total(1);
    for (int v = 0; v < inst.graph().n(); ++v) {
        const SymmetricFunction& f = inst.function(v);
        mpz_class l(1);
        for (const Value& x : f.table()) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.re().get_den_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.im().get_den_mpz_t());
        }
        if (l == 1) {
            fs.push_back(f);
            continue;
        }
        total *= l;
        std::vector<Value> t;
        t.reserve(f.size());
        const Value factor{Rational(l)};
        for (const Value& x : f.table())
            t.push_back(x * factor);
        fs.emplace_back(f.q(), f.arity(), std::move(t));
    }
    return {HolantInstance(inst.graph(), inst.q(), std::move(fs)), Value(Rational(total))};
}

// Full-arity values of integral peer tables as Zi, by class.
class FullValues {
public:
    const std::vector<Zi>& of(const PeerTable& t)
    {
        auto it = cache_.find(&t);
        if (it != cache_.end())
            return it->second;
        std::vector<Zi> v;
        const auto n = t.partition(t.arity()).size();
        v.reserve(n);
        for (std::uint32_t c = 0; c < n; ++c)
            v.push_back(Zi::of(t.full_value(c)));
        return cache_.emplace(&t, std::move(v)).first->second;
    }

private:
    std::unordered_map<const PeerTable*, std::vector<Zi>> cache_;
};

using StateMap = std::unordered_map<std::vector<std::uint32_t>, Zi, KeyHash>;

// A vertex enters the elimination already pinned to class `cls0` at arity `k0`.
struct DpVertex {
    const PeerTable* table;
    const std::vector<Zi>* full;
    int k0;
    std::uint32_t cls0;
};

// Sum over configurations of g's edges of prod_v f_v(kappa_v + sigma_v), where
// kappa_v is any member of the start class. Vertices are added in index
// order; an active vertex leaves the state once its last edge is assigned.
Zi dp_core(const Graph& g, const std::vector<DpVertex>& vs, bool skip_zero)
{
    const int n = g.n();
    std::vector<int> last(n, -1), k(n);
    for (int v = 0; v < n; ++v) {
        for (int e : g.incident(v))
            last[v] = std::max(last[v], g.other(e, v));
        k[v] = vs[v].k0;
        if (vs[v].k0 + g.degree(v) != vs[v].table->arity())
            throw InvalidArgument("dp: start arity plus degree differs from function arity at vertex "
                                  + std::to_string(v));
    }
    Zi factor(1);
    StateMap states;
    states.emplace(std::vector<std::uint32_t>{}, Zi(1));
    std::vector<int> slots;  // slot -> vertex
    std::vector<int> slot_of(n, -1);

    auto finalize = [&](int v) {
        const int s = slot_of[v];
        const auto& full = *vs[v].full;
        StateMap next;
        next.reserve(states.size());
        for (auto& [key, val] : states) {
            const Zi& f = full[key[s]];
            if (skip_zero && f.is_zero())
                continue;
            std::vector<std::uint32_t> nk;
            nk.reserve(key.size() - 1);
            nk.insert(nk.end(), key.begin(), key.begin() + s);
            nk.insert(nk.end(), key.begin() + s + 1, key.end());
            next[std::move(nk)].add_product(val, f);
        }
        states = std::move(next);
        slots.erase(slots.begin() + s);
        slot_of[v] = -1;
        for (std::size_t i = s; i < slots.size(); ++i)
            slot_of[slots[i]] = static_cast<int>(i);
    };

    for (int v = 0; v < n; ++v) {
        const PeerTable& t = *vs[v].table;
        if (g.degree(v) == 0) {
            factor = factor * (*vs[v].full)[vs[v].cls0];
            if (skip_zero && factor.is_zero())
                return Zi();
            continue;
        }
        if (skip_zero && t.class_is_zero(vs[v].k0, vs[v].cls0))
            return Zi();
        slot_of[v] = static_cast<int>(slots.size());
        slots.push_back(v);
        {
            StateMap next;
            next.reserve(states.size());
            for (auto& [key, val] : states) {
                auto nk = key;
                nk.push_back(vs[v].cls0);
                next.emplace(std::move(nk), std::move(val));
            }
            states = std::move(next);
        }
        std::vector<std::pair<int, int>> earlier;  // (neighbour, edge)
        for (int e : g.incident(v)) {
            int u = g.other(e, v);
            if (u < v)
                earlier.emplace_back(u, e);
        }
        std::sort(earlier.begin(), earlier.end());
        for (auto [u, e] : earlier) {
            const PeerTable& tu = *vs[u].table;
            const int su = slot_of[u], sv = slot_of[v];
            const int q = t.q();
            StateMap next;
            next.reserve(states.size() * 2);
            for (auto& [key, val] : states)
                for (int x = 0; x < q; ++x) {
                    const auto cu = tu.step(k[u], key[su], x);
                    const auto cv = t.step(k[v], key[sv], x);
                    if (skip_zero && (tu.class_is_zero(k[u] + 1, cu) || t.class_is_zero(k[v] + 1, cv)))
                        continue;
                    auto nk = key;
                    nk[su] = cu;
                    nk[sv] = cv;
                    next[std::move(nk)] += val;
                }
            states = std::move(next);
            ++k[u];
            ++k[v];
            if (last[u] == v)
                finalize(u);
            if (states.empty())
                return Zi();
        }
        if (last[v] < v)
            finalize(v);
    }
    Zi total;
    for (auto& [key, val] : states)
        total += val;
    return factor * total;
}

// Greedy elimination order: next is the vertex leaving the fewest active
// vertices behind, ties broken by more placed neighbours, then by index.
std::vector<int> frontier_order(const Graph& g)
{
    const int n = g.n();
    std::vector<char> placed(n, 0);
    std::vector<int> open(n), order;  // open[v]: unplaced neighbours of v
    for (int v = 0; v < n; ++v)
        open[v] = g.degree(v);
    int active = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1, best_active = 0, best_placed = 0;
        for (int v = 0; v < n; ++v) {
            if (placed[v])
                continue;
            int a = active + (open[v] > 0), pn = 0;
            for (int u : g.neighbors(v))
                if (placed[u]) {
                    ++pn;
                    a -= open[u] == 1;
                }
            if (best < 0 || a < best_active || (a == best_active && pn > best_placed)) {
                best = v;
                best_active = a;
                best_placed = pn;
            }
        }
        placed[best] = 1;
        order.push_back(best);
        for (int u : g.neighbors(best))
            --open[u];
        active = 0;
        for (int v = 0; v < n; ++v)
            active += placed[v] && open[v] > 0;
    }
    return order;
}

// dp_core with vertices relabelled into frontier_order.
Zi dp_ordered(const Graph& g, const std::vector<DpVertex>& vs, bool skip_zero)
{
    const auto order = frontier_order(g);
    std::vector<int> pos(g.n());
    for (int i = 0; i < g.n(); ++i)
        pos[order[i]] = i;
    Graph h(g.n());
    for (auto [a, b] : g.edges())
        h.add_edge(pos[a], pos[b]);
    std::vector<DpVertex> ws;
    for (int v : order)
        ws.push_back(vs[v]);
    return dp_core(h, ws, skip_zero);
}

} // namespace

Value simple_dp_hol(const HolantInstance& inst)
{
    const Scaled s = scale_to_integers(inst);
    PeerCache cache;
    FullValues full;
    std::vector<DpVertex> vs;
    for (int v = 0; v < inst.graph().n(); ++v) {
        const PeerTable& t = cache.of(s.instance.function(v));
        vs.push_back({&t, &full.of(t), 0, 0});
    }
    return dp_core(inst.graph(), vs, true).to_value() / s.divisor;
}

// ---------------------------------------------------------------------------

namespace {

class FptSolver {
public:
    FptSolver(const HolantInstance& inst, const SeparatorDecomposition& dec, const FptOptions& opt, FptStats* stats,
              PeerCache& cache)
        : inst_(inst), dec_(dec), opt_(opt), stats_(stats), cache_(cache), memo_(dec.size()), info_(dec.size())
    {
        const Graph& g = inst.graph();
        const int n = g.n();
        for (std::size_t i = 0; i < dec.size(); ++i) {
            const auto& nd = dec.node(static_cast<int>(i));
            if (nd.is_leaf())
                continue;
            Info& in = info_[i];
            in.boundary = vertex_boundary(g, nd.V);
            // 0: S, 1: U_1, 2: U_2, 3: boundary, -1: elsewhere.
            std::vector<int> where(n, -1);
            for (int v : nd.S)
                where[v] = 0;
            for (int v : dec.node(nd.left).V)
                where[v] = 1;
            for (int v : dec.node(nd.right).V)
                where[v] = 2;
            for (int v : in.boundary)
                where[v] = 3;
            in.T = nd.S;
            in.T.insert(in.T.end(), in.boundary.begin(), in.boundary.end());
            std::sort(in.T.begin(), in.T.end());
            std::vector<int> pos(n, -1);
            for (std::size_t p = 0; p < in.T.size(); ++p)
                pos[in.T[p]] = static_cast<int>(p);
            in.h0 = Graph(static_cast<int>(in.T.size()));
            for (std::size_t p = 0; p < in.T.size(); ++p) {
                const int v = in.T[p];
                Slot sl;
                sl.vertex = v;
                sl.on_boundary = where[v] == 3;
                for (int e : g.incident(v)) {
                    const int u = g.other(e, v);
                    const int w = where[u];
                    if (sl.on_boundary && w != 0 && w != 1 && w != 2)
                        continue;  // boundary-boundary or outside: not in H
                    if (w == 1)
                        ++sl.d[1];
                    else if (w == 2)
                        ++sl.d[2];
                    else if (w == 0 || w == 3) {
                        ++sl.d[0];
                        if (u > v)
                            in.h0.add_edge(static_cast<int>(p), pos[u]);
                    }
                }
                in.slots.push_back(sl);
            }
            for (int side = 1; side <= 2; ++side) {
                const int child = side == 1 ? nd.left : nd.right;
                for (int v : vertex_boundary(g, dec.node(child).V))
                    in.child_pos[side - 1].push_back(pos[v]);
            }
            for (std::size_t b = 0; b < in.boundary.size(); ++b)
                in.slots[pos[in.boundary[b]]].key_index = static_cast<int>(b);
            std::vector<int> lpos(in.T.size(), -1);
            for (std::size_t p = 0; p < in.T.size(); ++p)
                if (in.h0.degree(static_cast<int>(p)) > 0) {
                    lpos[p] = static_cast<int>(in.linked.size());
                    in.linked.push_back(static_cast<int>(p));
                }
            in.h0_linked = Graph(static_cast<int>(in.linked.size()));
            for (auto [a, b] : in.h0.edges())
                in.h0_linked.add_edge(lpos[a], lpos[b]);
        }
    }

    Zi solve() { return Z(dec_.root(), {}); }

private:
    struct Slot {
        int vertex = -1;
        bool on_boundary = false;
        int key_index = -1;
        int d[3] = {0, 0, 0};
    };
    struct Info {
        std::vector<int> boundary;
        std::vector<int> T;
        std::vector<Slot> slots;
        Graph h0;
        std::vector<int> child_pos[2];
        // Slots with an edge in h0, and h0 induced on them.
        std::vector<int> linked;
        Graph h0_linked;
    };
    // One enumerated (phi^0, phi^1, phi^2) image triple for a slot.
    struct Choice {
        std::uint32_t id[3] = {0, 0, 0};
        Zi weight{1};  // f_v at the sum of the representatives
    };

    Zi Z(int node, const std::vector<std::uint32_t>& key)
    {
        const auto& nd = dec_.node(node);
        if (nd.is_leaf())
            return Zi(1);
        if (const Zi* hit = memo_.find(node, key)) {
            if (stats_)
                ++stats_->memo_hits;
            return *hit;
        }
        Zi v = compute(node, key);
        const Zi& stored = memo_.insert(node, key, std::move(v));
        if (stats_) {
            stats_->memo_entries = memo_.size();
            stats_->max_keys_per_node = std::max<std::uint64_t>(stats_->max_keys_per_node, memo_.keys_at(node));
        }
        return stored;
    }

    const PeerTable& table_for(const Slot& sl, const std::vector<std::uint32_t>& key)
    {
        if (sl.on_boundary)
            return cache_.of_boolean(key[sl.key_index]);
        return cache_.of(inst_.function(sl.vertex));
    }

    void check_closure(int v, const BooleanSymmetricFunction& phi)
    {
        auto p = peer_partition(inst_.function(v), phi.arity());
        for (const auto& cls : p.classes) {
            std::size_t inside = 0;
            for (auto r : cls.ranks())
                inside += std::binary_search(phi.ranks().begin(), phi.ranks().end(), r);
            if (inside != 0 && inside != cls.size())
                throw FailedPrecondition("constraint at vertex " + std::to_string(v)
                                         + " is not a union of peer classes");
        }
    }

    void note_images(const Slot& sl, const PeerTable& t, int d)
    {
        const int count = static_cast<int>(t.partition(d).size());
        stats_->max_images = std::max(stats_->max_images, count);
        auto it = regularity_.find(sl.vertex);
        if (it == regularity_.end())
            it = regularity_.emplace(sl.vertex, regularity(inst_.function(sl.vertex))).first;
        if (count > it->second)
            stats_->images_within_regularity = false;
    }

    Zi compute(int node, const std::vector<std::uint32_t>& key)
    {
        const Info& in = info_[node];
        std::vector<const PeerTable*> tables;
        for (const auto& sl : in.slots) {
            if (sl.on_boundary) {
                const auto& phi = interned(key[sl.key_index]);
                if (phi.arity() != sl.d[0] + sl.d[1] + sl.d[2])
                    throw InvalidArgument("constraint arity mismatch at vertex " + std::to_string(sl.vertex));
                if (opt_.skip_zero_terms && phi.empty())
                    return Zi();
                if (opt_.validate_closure)
                    check_closure(sl.vertex, phi);
            }
            tables.push_back(&table_for(sl, key));
        }
        if (stats_)
            for (std::size_t p = 0; p < in.slots.size(); ++p)
                for (int side = 0; side < 3; ++side)
                    note_images(in.slots[p], *tables[p], in.slots[p].d[side]);
        if (opt_.fold_separator_sum)
            return contract(node, in, tables);
        return enumerate(node, in, tables);
    }

    // Literal form: every slot picks (phi^0, phi^1, phi^2) images, the term is
    // Z_0 * Z_1 * Z_2 * prod g~_v, with Z_0 solved over the boolean phi^0.
    Zi enumerate(int node, const Info& in, const std::vector<const PeerTable*>& tables)
    {
        const auto& nd = dec_.node(node);
        const bool skip = opt_.skip_zero_terms;
        std::vector<std::vector<Choice>> choices(in.slots.size());
        for (std::size_t p = 0; p < in.slots.size(); ++p) {
            const Slot& sl = in.slots[p];
            const PeerTable& t = *tables[p];
            const auto& P0 = t.partition(sl.d[0]);
            const auto& P1 = t.partition(sl.d[1]);
            const auto& P2 = t.partition(sl.d[2]);
            for (std::uint32_t c1 = 0; c1 < P1.size(); ++c1)
                for (std::uint32_t c2 = 0; c2 < P2.size(); ++c2) {
                    const Composition k12 = P1.representatives[c1] + P2.representatives[c2];
                    for (std::uint32_t c0 = 0; c0 < P0.size(); ++c0) {
                        Zi w = Zi::of(t.function()(P0.representatives[c0] + k12));
                        if (skip && w.is_zero())
                            continue;
                        Choice ch;
                        ch.id[0] = t.class_id(sl.d[0], c0);
                        ch.id[1] = t.class_id(sl.d[1], c1);
                        ch.id[2] = t.class_id(sl.d[2], c2);
                        ch.weight = std::move(w);
                        choices[p].push_back(std::move(ch));
                    }
                }
            if (choices[p].empty())
                return Zi();
        }

        std::unordered_map<std::vector<std::uint32_t>, Zi, KeyHash> base_memo;
        auto base = [&](const std::vector<const Choice*>& pick) -> Zi {
            std::vector<std::uint32_t> bkey;
            for (const Choice* c : pick)
                bkey.push_back(c->id[0]);
            if (auto it = base_memo.find(bkey); it != base_memo.end())
                return it->second;
            std::vector<DpVertex> vs;
            for (const Choice* c : pick) {
                const PeerTable& t = cache_.of_boolean(c->id[0]);
                vs.push_back({&t, &full_.of(t), 0, 0});
            }
            if (stats_)
                ++stats_->base_solves;
            Zi r = dp_ordered(in.h0, vs, skip);
            return base_memo.emplace(std::move(bkey), std::move(r)).first->second;
        };

        Zi total;
        std::vector<const Choice*> pick(in.slots.size());
        std::vector<std::uint32_t> k1, k2;
        auto dfs = [&](auto&& self, std::size_t p) -> void {
            if (p == pick.size()) {
                if (stats_)
                    ++stats_->terms;
                k1.clear();
                k2.clear();
                for (int q : in.child_pos[0])
                    k1.push_back(pick[q]->id[1]);
                for (int q : in.child_pos[1])
                    k2.push_back(pick[q]->id[2]);
                Zi term = Z(nd.left, k1);
                if (skip && term.is_zero())
                    return;
                term = term * Z(nd.right, k2);
                for (const Choice* c : pick)
                    if (!c->weight.is_one())
                        term = term * c->weight;
                if (skip && term.is_zero())
                    return;
                total.add_product(term, base(pick));
                return;
            }
            for (const Choice& c : choices[p]) {
                pick[p] = &c;
                self(self, p + 1);
            }
        };
        dfs(dfs, 0);
        return total;
    }

    // Folded sum over child images of Z1 * Z2 * base, where a slot starts the
    // base DP at the class of rep1 + rep2. Z2 is laid out as a dense array over
    // child-2 images and rewritten one slot at a time into child-1 images
    // (times the start class for slots that still have h0 edges, times f for
    // the others), so the child keys are never crossed explicitly.
    Zi contract(int node, const Info& in, const std::vector<const PeerTable*>& tables)
    {
        constexpr std::size_t max_cells = std::size_t{1} << 24;
        const auto& nd = dec_.node(node);
        const bool skip = opt_.skip_zero_terms;
        const std::size_t P = in.slots.size();
        std::vector<char> linked(P, 0);
        for (int p : in.linked)
            linked[p] = 1;

        auto cells = [&](const std::vector<std::size_t>& dim) {
            std::size_t c = 1;
            for (auto d : dim) {
                if (d != 0 && c > max_cells / d)
                    throw ResourceExhausted("fpt: separator images exceed " + std::to_string(max_cells) + " cells");
                c *= d;
            }
            return c;
        };
        // Odometer over a mixed-radix layout, slot 0 fastest.
        auto next_digit = [](std::vector<std::uint32_t>& digit, const std::vector<std::size_t>& dim) {
            for (std::size_t p = 0; p < digit.size(); ++p) {
                if (++digit[p] < dim[p])
                    return;
                digit[p] = 0;
            }
        };

        std::vector<std::size_t> dim(P);
        for (std::size_t p = 0; p < P; ++p)
            dim[p] = tables[p]->partition(in.slots[p].d[2]).size();
        std::vector<Zi> y(cells(dim));
        {
            std::vector<std::uint32_t> digit(P, 0), key;
            for (std::size_t i = 0; i < y.size(); ++i, next_digit(digit, dim)) {
                bool zero = false;
                for (std::size_t p = 0; p < P && skip && !zero; ++p)
                    zero = tables[p]->class_is_zero(in.slots[p].d[2], digit[p]);
                if (zero)
                    continue;
                key.clear();
                for (int q : in.child_pos[1])
                    key.push_back(tables[q]->class_id(in.slots[q].d[2], digit[q]));
                y[i] = Z(nd.right, key);
            }
        }

        struct Entry {
            std::uint32_t from, to;
            const Zi* w;  // null for linked slots: the start class is kept
        };
        std::vector<std::size_t> r12(P), new_dim(P);
        std::vector<std::vector<Entry>> kernel(P);
        std::vector<std::size_t> order(P);
        for (std::size_t p = 0; p < P; ++p) {
            const Slot& sl = in.slots[p];
            const PeerTable& t = *tables[p];
            const int d12 = sl.d[1] + sl.d[2];
            const auto& P1 = t.partition(sl.d[1]);
            const auto& P2 = t.partition(sl.d[2]);
            const auto& P12 = t.partition(d12);
            const std::vector<Zi>* full = linked[p] ? nullptr : &full_.of(t);
            r12[p] = P12.size();
            new_dim[p] = linked[p] ? P1.size() * r12[p] : P1.size();
            for (std::uint32_t b = 0; b < P2.size(); ++b)
                for (std::uint32_t a = 0; a < P1.size(); ++a) {
                    const auto start = P12.class_of[composition_rank(P1.representatives[a] + P2.representatives[b])];
                    if (skip && t.class_is_zero(d12, start))
                        continue;
                    if (linked[p]) {
                        kernel[p].push_back({b, static_cast<std::uint32_t>(a * r12[p] + start), nullptr});
                        continue;
                    }
                    const Zi& f = (*full)[start];
                    if (!(skip && f.is_zero()))
                        kernel[p].push_back({b, a, &f});
                }
            order[p] = p;
        }
        // Shrinking slots first keeps the intermediate arrays small.
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return new_dim[a] * dim[b] < new_dim[b] * dim[a];
        });
        for (std::size_t p : order) {
            std::size_t inner = 1;
            for (std::size_t q = 0; q < p; ++q)
                inner *= dim[q];
            const std::size_t outer = y.size() / (inner * dim[p]);
            auto nd2 = dim;
            nd2[p] = new_dim[p];
            std::vector<Zi> out(cells(nd2));
            for (std::size_t o = 0; o < outer; ++o)
                for (const Entry& e : kernel[p]) {
                    const std::size_t src = (o * dim[p] + e.from) * inner;
                    const std::size_t dst = (o * new_dim[p] + e.to) * inner;
                    for (std::size_t i = 0; i < inner; ++i) {
                        const Zi& v = y[src + i];
                        if (v.is_zero())
                            continue;
                        if (e.w)
                            out[dst + i].add_product(v, *e.w);
                        else
                            out[dst + i] += v;
                        if (stats_)
                            ++stats_->terms;
                    }
                }
            y = std::move(out);
            dim = std::move(nd2);
        }

        std::unordered_map<std::vector<std::uint32_t>, Zi, KeyHash> base_memo;
        Zi total;
        std::vector<std::uint32_t> digit(P, 0), key, starts;
        for (std::size_t i = 0; i < y.size(); ++i, next_digit(digit, dim)) {
            if (y[i].is_zero())
                continue;
            key.clear();
            for (int q : in.child_pos[0]) {
                const std::uint32_t a = linked[q] ? digit[q] / r12[q] : digit[q];
                key.push_back(tables[q]->class_id(in.slots[q].d[1], a));
            }
            const Zi z1 = Z(nd.left, key);
            if (skip && z1.is_zero())
                continue;
            starts.clear();
            for (int q : in.linked)
                starts.push_back(static_cast<std::uint32_t>(digit[q] % r12[q]));
            auto it = base_memo.find(starts);
            if (it == base_memo.end()) {
                std::vector<DpVertex> vs;
                for (std::size_t j = 0; j < in.linked.size(); ++j) {
                    const Slot& sl = in.slots[in.linked[j]];
                    const PeerTable& t = *tables[in.linked[j]];
                    vs.push_back({&t, &full_.of(t), sl.d[1] + sl.d[2], starts[j]});
                }
                if (stats_)
                    ++stats_->base_solves;
                it = base_memo.emplace(starts, dp_ordered(in.h0_linked, vs, skip)).first;
            }
            if (it->second.is_zero())
                continue;
            total.add_product(z1 * y[i], it->second);
        }
        return total;
    }

    const HolantInstance& inst_;
    const SeparatorDecomposition& dec_;
    FptOptions opt_;
    FptStats* stats_;
    PeerCache& cache_;
    BasicMemoTable<Zi> memo_;
    std::vector<Info> info_;
    FullValues full_;
    std::unordered_map<int, int> regularity_;
};

} // namespace

Value fpt_hol(const HolantInstance& inst, const SeparatorDecomposition& dec, const FptOptions& opt, FptStats* stats,
              PeerCache* cache)
{
    auto rep = validate(inst.graph(), dec);
    if (!rep.ok)
        throw InvalidArgument("invalid decomposition at node " + std::to_string(rep.node) + ": " + rep.message);
    const Scaled s = scale_to_integers(inst);
    PeerCache local;
    FptSolver solver(s.instance, dec, opt, stats, cache ? *cache : local);
    return solver.solve().to_value() / s.divisor;
}

Value fpt_hol(const HolantInstance& inst, int s_cap)
{
    auto r = find_min_width(inst.graph(), s_cap);
    return fpt_hol(inst, r.decomposition);
}

Value hol_with_boundary(const HolantInstance& inst, const BoundaryConstraintMap& constraints)
{
    std::vector<SymmetricFunction> fs = inst.functions();
    for (const auto& [v, phi] : constraints) {
        if (v < 0 || v >= inst.graph().n())
            throw InvalidArgument("boundary vertex " + std::to_string(v) + " out of range");
        if (phi.q() != inst.q() || phi.arity() != inst.graph().degree(v))
            throw InvalidArgument("constraint at vertex " + std::to_string(v) + " has arity "
                                  + std::to_string(phi.arity()) + ", degree is "
                                  + std::to_string(inst.graph().degree(v)));
        fs[v] = phi.to_function();
    }
    HolantInstance h(inst.graph(), inst.q(), std::move(fs));
    if (h.graph().n() <= 24)
        return simple_dp_hol(h);
    return fpt_hol(h);
}

} // namespace holant
