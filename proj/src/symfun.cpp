#include "holant/symfun.hpp"

#include "holant/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace holant {

namespace {

constexpr int kBinomMax = 320;

const std::vector<std::uint64_t>& binom_table()
{
    static const std::vector<std::uint64_t> table = [] {
        std::vector<std::uint64_t> t(kBinomMax * kBinomMax, 0);
        constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
        for (int n = 0; n < kBinomMax; ++n) {
            t[n * kBinomMax] = 1;
            for (int k = 1; k <= n; ++k) {
                std::uint64_t a = t[(n - 1) * kBinomMax + k - 1], b = t[(n - 1) * kBinomMax + k];
                t[n * kBinomMax + k] = (a > cap - b) ? cap : a + b;
            }
        }
        return t;
    }();
    return table;
}

std::uint64_t binom(int n, int k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    if (n >= kBinomMax)
        throw ResourceExhausted("composition table too large (n=" + std::to_string(n) + ")");
    return binom_table()[n * kBinomMax + k];
}

// Weak compositions of w into p parts.
std::uint64_t weak(int w, int p)
{
    if (w < 0)
        return 0;
    if (p == 0)
        return w == 0 ? 1 : 0;
    return binom(w + p - 1, p - 1);
}

void require_q(int q)
{
    if (q < 2)
        throw InvalidArgument("domain size must be at least 2");
}

std::uint32_t checked_count(int q, int d)
{
    const auto n = composition_count(q, d);
    if (n > (1u << 26))
        throw ResourceExhausted("symmetric function table with " + std::to_string(n) + " entries");
    return static_cast<std::uint32_t>(n);
}

} // namespace

int Composition::weight() const { return std::accumulate(counts.begin(), counts.end(), 0); }

Composition Composition::of_tuple(int q, std::span<const int> tuple)
{
    Composition c = zero(q);
    for (int x : tuple) {
        if (x < 0 || x >= q)
            throw InvalidArgument("tuple entry out of domain");
        ++c.counts[x];
    }
    return c;
}

Composition& Composition::operator+=(const Composition& o)
{
    if (o.q() != q())
        throw InvalidArgument("composition domain mismatch");
    for (int i = 0; i < q(); ++i)
        counts[i] += o.counts[i];
    return *this;
}

std::string Composition::to_string() const
{
    std::string s = "(";
    for (int i = 0; i < q(); ++i)
        s += (i ? "," : "") + std::to_string(counts[i]);
    return s + ")";
}

std::uint64_t composition_count(int q, int d) { return weak(d, q); }

std::uint32_t composition_rank(const Composition& c)
{
    const int q = c.q();
    int r = c.weight();
    std::uint64_t idx = 0;
    for (int i = 0; i + 1 < q; ++i) {
        if (c.counts[i] < 0)
            throw InvalidArgument("negative composition entry");
        idx += weak(r - c.counts[i] - 1, q - i);
        r -= c.counts[i];
    }
    return static_cast<std::uint32_t>(idx);
}

Composition composition_unrank(int q, int d, std::uint32_t rank)
{
    Composition c = Composition::zero(q);
    std::uint64_t rem = rank;
    int r = d;
    for (int i = 0; i + 1 < q; ++i) {
        for (int v = r; v >= 0; --v) {
            const auto cnt = weak(r - v, q - i - 1);
            if (rem < cnt) {
                c.counts[i] = v;
                r -= v;
                break;
            }
            rem -= cnt;
        }
    }
    c.counts[q - 1] = r;
    return c;
}

std::vector<Composition> all_compositions(int q, int d)
{
    require_q(q);
    const auto n = checked_count(q, d);
    std::vector<Composition> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        out.push_back(composition_unrank(q, d, i));
    return out;
}

// ---------------------------------------------------------------------------

SymmetricFunction::SymmetricFunction(int q, int d, std::vector<Value> table) : q_(q), d_(d), table_(std::move(table))
{
    require_q(q);
    if (d < 0)
        throw InvalidArgument("negative arity");
    if (table_.size() != composition_count(q, d))
        throw InvalidArgument("table for q=" + std::to_string(q) + ", d=" + std::to_string(d) + " needs "
                              + std::to_string(composition_count(q, d)) + " values, got "
                              + std::to_string(table_.size()));
}

SymmetricFunction SymmetricFunction::constant(int q, int d, const Value& v)
{
    require_q(q);
    return SymmetricFunction(q, d, std::vector<Value>(checked_count(q, d), v));
}

const Value& SymmetricFunction::operator()(const Composition& c) const
{
    if (c.q() != q_ || c.weight() != d_)
        throw InvalidArgument("composition " + c.to_string() + " does not match function arity");
    return table_[composition_rank(c)];
}

const Value& SymmetricFunction::eval_tuple(std::span<const int> tuple) const
{
    if (static_cast<int>(tuple.size()) != d_)
        throw InvalidArgument("tuple length does not match arity");
    return (*this)(Composition::of_tuple(q_, tuple));
}

bool SymmetricFunction::is_boolean() const
{
    return std::all_of(table_.begin(), table_.end(), [](const Value& v) { return v.is_zero() || v.is_one(); });
}

bool SymmetricFunction::is_identically_zero() const
{
    return std::all_of(table_.begin(), table_.end(), [](const Value& v) { return v.is_zero(); });
}

bool SymmetricFunction::is_nonnegative_real() const
{
    return std::all_of(table_.begin(), table_.end(), [](const Value& v) { return v.is_real() && sgn(v.re()) >= 0; });
}

std::size_t SymmetricFunction::hash() const
{
    std::size_t h = static_cast<std::size_t>(q_) * 131 + static_cast<std::size_t>(d_);
    for (const auto& v : table_)
        h = h * 1099511628211ULL ^ v.hash();
    return h;
}

std::string SymmetricFunction::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < table_.size(); ++i)
        s += (i ? " " : "") + table_[i].to_string();
    return s;
}

// ---------------------------------------------------------------------------

BooleanSymmetricFunction::BooleanSymmetricFunction(int q, int k, std::vector<std::uint32_t> member_ranks)
    : q_(q), k_(k), ranks_(std::move(member_ranks))
{
    require_q(q);
    std::sort(ranks_.begin(), ranks_.end());
    ranks_.erase(std::unique(ranks_.begin(), ranks_.end()), ranks_.end());
    if (!ranks_.empty() && ranks_.back() >= composition_count(q, k))
        throw InvalidArgument("boolean function member out of range");
}

BooleanSymmetricFunction::BooleanSymmetricFunction(int q, int k, const std::vector<Composition>& members)
    : q_(q), k_(k)
{
    require_q(q);
    for (const auto& c : members) {
        if (c.q() != q || c.weight() != k)
            throw InvalidArgument("member " + c.to_string() + " has wrong weight or domain");
        ranks_.push_back(composition_rank(c));
    }
    std::sort(ranks_.begin(), ranks_.end());
    ranks_.erase(std::unique(ranks_.begin(), ranks_.end()), ranks_.end());
}

BooleanSymmetricFunction BooleanSymmetricFunction::full(int q, int k)
{
    std::vector<std::uint32_t> r(checked_count(q, k));
    std::iota(r.begin(), r.end(), 0u);
    return {q, k, std::move(r)};
}

BooleanSymmetricFunction BooleanSymmetricFunction::from_function(const SymmetricFunction& f)
{
    std::vector<std::uint32_t> r;
    for (std::uint32_t i = 0; i < f.size(); ++i) {
        if (f.at(i).is_one())
            r.push_back(i);
        else if (!f.at(i).is_zero())
            throw InvalidArgument("function is not 0/1 valued");
    }
    return {f.q(), f.arity(), std::move(r)};
}

std::vector<Composition> BooleanSymmetricFunction::members() const
{
    std::vector<Composition> out;
    out.reserve(ranks_.size());
    for (auto r : ranks_)
        out.push_back(composition_unrank(q_, k_, r));
    return out;
}

bool BooleanSymmetricFunction::contains(const Composition& c) const
{
    if (c.q() != q_ || c.weight() != k_)
        return false;
    return std::binary_search(ranks_.begin(), ranks_.end(), composition_rank(c));
}

SymmetricFunction BooleanSymmetricFunction::to_function() const
{
    std::vector<Value> t(checked_count(q_, k_), Value(0));
    for (auto r : ranks_)
        t[r] = Value(1);
    return SymmetricFunction(q_, k_, std::move(t));
}

namespace {

struct Registry {
    using Key = std::tuple<int, int, std::vector<std::uint32_t>>;
    std::mutex mu;
    std::map<Key, std::uint32_t> ids;
    std::deque<BooleanSymmetricFunction> by_id;
};

Registry& registry()
{
    static Registry r;
    return r;
}

} // namespace

std::uint32_t intern(const BooleanSymmetricFunction& g)
{
    Registry& r = registry();
    std::lock_guard lock(r.mu);
    auto [it, inserted] = r.ids.try_emplace(Registry::Key{g.q(), g.arity(), g.ranks()},
                                            static_cast<std::uint32_t>(r.by_id.size()));
    if (inserted)
        r.by_id.push_back(g);
    return it->second;
}

const BooleanSymmetricFunction& interned(std::uint32_t id)
{
    Registry& r = registry();
    std::lock_guard lock(r.mu);
    if (id >= r.by_id.size())
        throw InvalidArgument("unknown boolean function id " + std::to_string(id));
    return r.by_id[id];
}

// ---------------------------------------------------------------------------

SymmetricFunction pin(const SymmetricFunction& f, const Composition& kappa)
{
    if (kappa.q() != f.q())
        throw InvalidArgument("pin: domain mismatch");
    const int k = kappa.weight();
    if (k > f.arity())
        throw InvalidArgument("pin: pinning " + std::to_string(k) + " arguments of a "
                              + std::to_string(f.arity()) + "-ary function");
    for (int c : kappa.counts)
        if (c < 0)
            throw InvalidArgument("pin: negative composition entry");
    if (k == 0)
        return f;
    const int rest = f.arity() - k;
    const auto n = checked_count(f.q(), rest);
    std::vector<Value> t;
    t.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        t.push_back(f(composition_unrank(f.q(), rest, i) + kappa));
    return SymmetricFunction(f.q(), rest, std::move(t));
}

namespace {

// Distinct-value ids of f's table; equal ids iff equal Values.
std::vector<std::uint32_t> value_ids(const SymmetricFunction& f)
{
    std::unordered_map<Value, std::uint32_t, ValueHash> seen;
    std::vector<std::uint32_t> ids(f.size());
    for (std::uint32_t i = 0; i < f.size(); ++i)
        ids[i] = seen.try_emplace(f.at(i), static_cast<std::uint32_t>(seen.size())).first->second;
    return ids;
}

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const
    {
        std::size_t h = v.size();
        for (auto x : v)
            h = (h ^ x) * 0x100000001b3ULL;
        return h;
    }
};

PeerPartition partition_with_ids(const SymmetricFunction& f, int k, const std::vector<std::uint32_t>& vid)
{
    if (k < 0 || k > f.arity())
        throw InvalidArgument("peer_partition: arity " + std::to_string(k) + " outside 0.."
                              + std::to_string(f.arity()));
    const int q = f.q();
    const int rest = f.arity() - k;
    const auto nk = checked_count(q, k);
    const auto nrest = checked_count(q, rest);
    std::vector<Composition> mus;
    mus.reserve(nrest);
    for (std::uint32_t j = 0; j < nrest; ++j)
        mus.push_back(composition_unrank(q, rest, j));

    PeerPartition p;
    p.q = q;
    p.arity = k;
    p.class_of.resize(nk);
    std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, VecHash> classes;
    std::vector<std::vector<std::uint32_t>> members;
    std::vector<std::uint32_t> key(nrest);
    for (std::uint32_t i = 0; i < nk; ++i) {
        const Composition kappa = composition_unrank(q, k, i);
        for (std::uint32_t j = 0; j < nrest; ++j)
            key[j] = vid[composition_rank(mus[j] + kappa)];
        auto [it, inserted] = classes.try_emplace(key, static_cast<std::uint32_t>(members.size()));
        if (inserted) {
            members.emplace_back();
            p.representatives.push_back(kappa);
        }
        members[it->second].push_back(i);
        p.class_of[i] = it->second;
    }
    // Classes are created in rank order, so each representative is its
    // class's smallest member and classes are sorted by representative.
    for (auto& m : members)
        p.classes.emplace_back(q, k, std::move(m));
    return p;
}

} // namespace

PeerPartition peer_partition(const SymmetricFunction& f, int k) { return partition_with_ids(f, k, value_ids(f)); }

int regularity(const SymmetricFunction& f)
{
    const auto vid = value_ids(f);
    std::size_t best = 1;
    for (int k = 0; k <= f.arity(); ++k)
        best = std::max(best, partition_with_ids(f, k, vid).size());
    return static_cast<int>(best);
}

std::vector<BooleanSymmetricFunction> peering_closure_at(const SymmetricFunction& f, int k)
{
    const auto p = peer_partition(f, k);
    if (p.size() > 20)
        throw ResourceExhausted("peering closure with 2^" + std::to_string(p.size()) + " members");
    std::vector<BooleanSymmetricFunction> out;
    const std::uint32_t total = 1u << p.size();
    out.reserve(total);
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        std::vector<std::uint32_t> ranks;
        for (std::size_t c = 0; c < p.size(); ++c)
            if (mask >> c & 1u)
                ranks.insert(ranks.end(), p.classes[c].ranks().begin(), p.classes[c].ranks().end());
        out.emplace_back(f.q(), k, std::move(ranks));
        intern(out.back());
    }
    return out;
}

Value evaluate_by_peers(const SymmetricFunction& f, std::span<const Composition> reps)
{
    Composition total = Composition::zero(f.q());
    for (const auto& r : reps)
        total += r;
    if (total.weight() != f.arity())
        throw InvalidArgument("evaluate_by_peers: representative weights sum to " + std::to_string(total.weight())
                              + ", arity is " + std::to_string(f.arity()));
    return f(total);
}

// ---------------------------------------------------------------------------

PeerTable::PeerTable(SymmetricFunction f, std::uint32_t id)
    : f_(std::move(f)), id_(id), levels_(f_.arity() + 1), once_(new std::once_flag[f_.arity() + 1])
{
}

const PeerTable::Level& PeerTable::level(int k) const
{
    if (k < 0 || k > f_.arity())
        throw InvalidArgument("peer level outside arity range");
    std::call_once(once_[k], [&] {
        auto lv = std::make_unique<Level>();
        lv->partition = peer_partition(f_, k);
        const auto n = lv->partition.size();
        lv->zero.resize(n);
        lv->ids.resize(n);
        for (std::size_t c = 0; c < n; ++c) {
            lv->zero[c] = pin(f_, lv->partition.representatives[c]).is_identically_zero();
            lv->ids[c] = intern(lv->partition.classes[c]);
        }
        if (k < f_.arity()) {
            const Level& next = level(k + 1);
            const int q = f_.q();
            lv->step.resize(n * q);
            for (std::size_t c = 0; c < n; ++c)
                for (int y = 0; y < q; ++y) {
                    Composition r = lv->partition.representatives[c];
                    ++r.counts[y];
                    lv->step[c * q + y] = next.partition.class_of[composition_rank(r)];
                }
        }
        levels_[k] = std::move(lv);
    });
    return *levels_[k];
}

const PeerPartition& PeerTable::partition(int k) const { return level(k).partition; }

std::uint32_t PeerTable::step(int k, std::uint32_t cls, int x) const
{
    return level(k).step[cls * f_.q() + x];
}

const Value& PeerTable::full_value(std::uint32_t cls) const
{
    const Level& lv = level(f_.arity());
    return f_(lv.partition.representatives[cls]);
}

bool PeerTable::class_is_zero(int k, std::uint32_t cls) const { return level(k).zero[cls]; }

std::uint32_t PeerTable::class_id(int k, std::uint32_t cls) const { return level(k).ids[cls]; }

} // namespace holant
