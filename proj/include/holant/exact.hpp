#pragma once

#include "holant/graph.hpp"
#include "holant/sepdecomp.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace holant {

/// Bits of enumeration allowed to brute force: HOLANT_ENUM_CAP or 24.
int enumeration_cap_bits();

Value brute_force_hol(const HolantInstance& instance);

/// Vertex elimination in index order; the state holds one pin class per
/// active vertex.
Value simple_dp_hol(const HolantInstance& instance);

/// PeerTables interned by function table, shared between solver calls.
class PeerCache {
public:
    const PeerTable& of(const SymmetricFunction& f);
    /// Table for an interned boolean function, keyed by its id.
    const PeerTable& of_boolean(std::uint32_t id);

private:
    struct FnHash {
        std::size_t operator()(const SymmetricFunction& f) const { return f.hash(); }
    };
    std::mutex mu_;
    std::unordered_map<SymmetricFunction, std::unique_ptr<PeerTable>, FnHash> tables_;
    std::unordered_map<std::uint32_t, const PeerTable*> booleans_;
};

struct FptOptions {
    /// Skip terms that are provably zero (empty images, zero pins, zero sub-results).
    bool skip_zero_terms = true;
    /// Fold the separator-internal sum into pinned start classes instead of
    /// enumerating phi^0 images and solving Z_0 separately.
    bool fold_separator_sum = true;
    /// Check that every constraint passed down is a union of base peer classes.
    bool validate_closure = false;
};

struct FptStats {
    std::uint64_t memo_entries = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t terms = 0;
    std::uint64_t base_solves = 0;
    /// Largest number of distinct constraint keys seen at one node.
    std::uint64_t max_keys_per_node = 0;
    /// Largest number of peer images offered to one vertex on one side,
    /// and whether it ever exceeded regularity(f_v).
    int max_images = 0;
    bool images_within_regularity = true;
};

/// Boundary vertex -> constraint of arity equal to its degree in the sub-instance.
using BoundaryConstraintMap = std::map<int, BooleanSymmetricFunction>;

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const
    {
        std::size_t h = v.size() * 0x9e3779b97f4a7c15ULL;
        for (auto x : v)
            h = (h ^ x) * 0x100000001b3ULL;
        return h;
    }
};

/// Memo of Z(V_i, {phi}) keyed by node and the interned constraint ids in
/// boundary order. Insert-if-absent, first writer wins.
template <class T>
class BasicMemoTable {
public:
    explicit BasicMemoTable(std::size_t nodes) : per_node_(nodes) {}

    const T* find(int node, const std::vector<std::uint32_t>& key) const
    {
        std::lock_guard lock(mu_);
        const auto& m = per_node_[node];
        auto it = m.find(key);
        return it == m.end() ? nullptr : &it->second;
    }

    const T& insert(int node, std::vector<std::uint32_t> key, T v)
    {
        std::lock_guard lock(mu_);
        return per_node_[node].try_emplace(std::move(key), std::move(v)).first->second;
    }

    std::size_t keys_at(int node) const
    {
        std::lock_guard lock(mu_);
        return per_node_[node].size();
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        std::size_t s = 0;
        for (const auto& m : per_node_)
            s += m.size();
        return s;
    }

private:
    mutable std::mutex mu_;
    std::vector<std::unordered_map<std::vector<std::uint32_t>, T, KeyHash>> per_node_;
};

using MemoTable = BasicMemoTable<Value>;

Value fpt_hol(const HolantInstance& instance, const SeparatorDecomposition& decomposition,
              const FptOptions& options = {}, FptStats* stats = nullptr, PeerCache* cache = nullptr);

/// fpt_hol on a decomposition from find_min_width(graph, s_cap).
Value fpt_hol(const HolantInstance& instance, int s_cap = 8);

/// Holant of `instance` with the listed vertices' functions replaced by
/// boolean constraints.
Value hol_with_boundary(const HolantInstance& instance, const BoundaryConstraintMap& constraints);

} // namespace holant
