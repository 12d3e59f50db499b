#pragma once

#include "holant/value.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace holant {

/// Weak q-composition of an arity: `counts[i]` is the number of arguments
/// holding value `i`. Two tuples are permutations of each other iff they map
/// to the same composition.
struct Composition {
    std::vector<int> counts;

    Composition() = default;
    explicit Composition(std::vector<int> c) : counts(std::move(c)) {}

    int q() const { return static_cast<int>(counts.size()); }
    int weight() const;

    static Composition zero(int q) { return Composition(std::vector<int>(q, 0)); }
    static Composition of_tuple(int q, std::span<const int> tuple);

    Composition& operator+=(const Composition& o);
    friend Composition operator+(Composition a, const Composition& b) { return a += b; }
    friend bool operator==(const Composition&, const Composition&) = default;

    std::string to_string() const;
};

/// Number of weak q-compositions of `d`, i.e. binomial(d+q-1, q-1).
std::uint64_t composition_count(int q, int d);

/// Canonical order of weight-d compositions: lexicographic order of the
/// sorted argument tuples. For q = 2 index k is the composition with k ones,
/// so a table reads as the usual `[f_0, ..., f_d]`.
std::uint32_t composition_rank(const Composition& c);
Composition composition_unrank(int q, int d, std::uint32_t rank);
std::vector<Composition> all_compositions(int q, int d);

/// q-domain, d-ary symmetric function stored as a composition-indexed table.
class SymmetricFunction {
public:
    SymmetricFunction(int q, int d, std::vector<Value> table);

    static SymmetricFunction constant(int q, int d, const Value& v);

    int q() const { return q_; }
    int arity() const { return d_; }
    std::size_t size() const { return table_.size(); }
    const std::vector<Value>& table() const { return table_; }

    const Value& operator()(const Composition& c) const;
    const Value& at(std::uint32_t rank) const { return table_[rank]; }

    /// Evaluates on an explicit argument tuple.
    const Value& eval_tuple(std::span<const int> tuple) const;

    bool is_boolean() const;
    bool is_identically_zero() const;
    bool is_nonnegative_real() const;

    std::size_t hash() const;
    friend bool operator==(const SymmetricFunction& a, const SymmetricFunction& b)
    {
        return a.q_ == b.q_ && a.d_ == b.d_ && a.table_ == b.table_;
    }

    /// Space separated table values, `[a, b, ...]` style without brackets.
    std::string to_string() const;

private:
    int q_;
    int d_;
    std::vector<Value> table_;
};

/// A set of weight-k compositions; the 0/1 symmetric function it denotes.
class BooleanSymmetricFunction {
public:
    BooleanSymmetricFunction(int q, int k, std::vector<std::uint32_t> member_ranks);
    BooleanSymmetricFunction(int q, int k, const std::vector<Composition>& members);

    static BooleanSymmetricFunction empty(int q, int k) { return {q, k, std::vector<std::uint32_t>{}}; }
    static BooleanSymmetricFunction full(int q, int k);
    static BooleanSymmetricFunction from_function(const SymmetricFunction& f);

    int q() const { return q_; }
    int arity() const { return k_; }
    bool empty() const { return ranks_.empty(); }
    std::size_t size() const { return ranks_.size(); }

    /// Sorted member ranks.
    const std::vector<std::uint32_t>& ranks() const { return ranks_; }
    std::vector<Composition> members() const;
    bool contains(const Composition& c) const;

    SymmetricFunction to_function() const;

    friend bool operator==(const BooleanSymmetricFunction&, const BooleanSymmetricFunction&) = default;

private:
    int q_;
    int k_;
    std::vector<std::uint32_t> ranks_;
};

/// Stable-within-a-run id per distinct (q, k, members) boolean function.
/// Internally synchronized.
std::uint32_t intern(const BooleanSymmetricFunction& g);
const BooleanSymmetricFunction& interned(std::uint32_t id);

/// Classes of weight-k compositions with identical pinned functions.
struct PeerPartition {
    int q = 0;
    int arity = 0;
    std::vector<BooleanSymmetricFunction> classes;
    /// Smallest-rank member of each class; classes are ordered by it.
    std::vector<Composition> representatives;
    /// `class_of[rank]` for every weight-k composition.
    std::vector<std::uint32_t> class_of;

    std::size_t size() const { return classes.size(); }
};

/// g(mu) = f(mu + kappa).
SymmetricFunction pin(const SymmetricFunction& f, const Composition& kappa);

PeerPartition peer_partition(const SymmetricFunction& f, int k);

/// Smallest C for which f is C-regular.
int regularity(const SymmetricFunction& f);

/// Every union of peer classes at arity k (the empty union first), interned.
std::vector<BooleanSymmetricFunction> peering_closure_at(const SymmetricFunction& f, int k);

/// f at the sum of the given representatives.
Value evaluate_by_peers(const SymmetricFunction& f, std::span<const Composition> reps);

// Builtin constraint families.
enum class BuiltinKind {
    equality,
    at_most_one,
    exact_one,
    cyclic,
    cyclic_with_exceptions,
    explicit_boolean_weights,
    explicit_table,
};

/// Entry override for `cyclic_with_exceptions`: the composition where color
/// `color` has count d - sum(rest) and the other colors (in increasing order)
/// carry `rest`.
struct ExtremeOverride {
    int color = 0;
    std::vector<int> rest;
    Value value;
};

struct BuiltinParams {
    std::vector<Value> weights;            // equality
    int period = 1;                        // cyclic*
    std::vector<Value> residue_values;     // cyclic*: c^(q-1) entries
    int exception_span = 0;                // cyclic_with_exceptions
    std::vector<ExtremeOverride> overrides;
    std::vector<Value> table;              // explicit_*
};

SymmetricFunction builtin(BuiltinKind kind, int q, int d, const BuiltinParams& params);

std::string to_string(BuiltinKind kind);
BuiltinKind parse_builtin_kind(const std::string& name);

/// Parses the textual parameter list of a `builtin <kind> <params...>` literal.
BuiltinParams parse_builtin_params(BuiltinKind kind, int q, std::span<const std::string> tokens);
std::vector<std::string> format_builtin_params(BuiltinKind kind, int q, const BuiltinParams& params);

/// Lazily computed peer partitions of one function for every arity, plus
/// the one-step pin transitions used by the dynamic programs.
class PeerTable {
public:
    explicit PeerTable(SymmetricFunction f, std::uint32_t id = 0);

    const SymmetricFunction& function() const { return f_; }
    std::uint32_t id() const { return id_; }
    int arity() const { return f_.arity(); }
    int q() const { return f_.q(); }

    const PeerPartition& partition(int k) const;

    /// Class at arity k+1 reached by pinning one more argument to `x`.
    std::uint32_t step(int k, std::uint32_t cls, int x) const;

    /// f evaluated when the full arity is pinned by class `cls` (k == d).
    const Value& full_value(std::uint32_t cls) const;

    /// True if Pin(rep(cls), f) is identically zero.
    bool class_is_zero(int k, std::uint32_t cls) const;

    /// Interned id of the class's boolean function.
    std::uint32_t class_id(int k, std::uint32_t cls) const;

private:
    struct Level {
        PeerPartition partition;
        std::vector<std::uint32_t> step;        // cls * q + x -> class at k+1
        std::vector<char> zero;
        std::vector<std::uint32_t> ids;
    };
    const Level& level(int k) const;

    SymmetricFunction f_;
    std::uint32_t id_;
    mutable std::vector<std::unique_ptr<Level>> levels_;
    mutable std::unique_ptr<std::once_flag[]> once_;
};

} // namespace holant
