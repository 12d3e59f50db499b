#include <doctest.h>

#include "holant/errors.hpp"
#include "holant/symfun.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace holant;

namespace {

std::vector<Value> ints(std::initializer_list<long> xs)
{
    std::vector<Value> v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

SymmetricFunction boolean_fn(std::initializer_list<long> xs)
{
    return SymmetricFunction(2, static_cast<int>(xs.size()) - 1, ints(xs));
}

// Every tuple of [q]^d, in odometer order.
std::vector<std::vector<int>> tuples(int q, int d)
{
    std::vector<std::vector<int>> out;
    std::vector<int> t(d, 0);
    while (true) {
        out.push_back(t);
        int i = 0;
        while (i < d && ++t[i] == q)
            t[i++] = 0;
        if (i == d)
            break;
    }
    return out;
}

// Pin by tuple enumeration: the pinned value at a tuple of the rest is f on
// the concatenation with any tuple realizing kappa.
SymmetricFunction pin_oracle(const SymmetricFunction& f, const Composition& kappa)
{
    std::vector<int> fixed;
    for (int i = 0; i < kappa.q(); ++i)
        fixed.insert(fixed.end(), kappa.counts[i], i);
    const int rest = f.arity() - kappa.weight();
    std::map<std::uint32_t, Value> table;
    for (const auto& t : tuples(f.q(), rest)) {
        std::vector<int> full = t;
        full.insert(full.end(), fixed.begin(), fixed.end());
        std::rotate(full.begin(), full.begin() + rest / 2, full.end());
        const auto r = composition_rank(Composition::of_tuple(f.q(), t));
        const Value v = f.eval_tuple(full);
        auto [it, ins] = table.emplace(r, v);
        REQUIRE(it->second == v);
    }
    std::vector<Value> out;
    for (auto& [r, v] : table)
        out.push_back(v);
    return SymmetricFunction(f.q(), rest, out);
}

// Number of distinct pinned tables over all tuples of length k, by brute force.
std::size_t distinct_pins_oracle(const SymmetricFunction& f, int k)
{
    std::set<std::vector<std::string>> seen;
    for (const auto& t : tuples(f.q(), k)) {
        auto g = pin_oracle(f, Composition::of_tuple(f.q(), t));
        std::vector<std::string> key;
        for (const auto& v : g.table())
            key.push_back(v.to_string());
        seen.insert(key);
    }
    return seen.size();
}

SymmetricFunction random_fn(int q, int d, unsigned& seed)
{
    std::vector<Value> t;
    for (std::uint64_t i = 0; i < composition_count(q, d); ++i) {
        seed = seed * 1103515245u + 12345u;
        t.emplace_back(static_cast<long>((seed >> 16) % 3));
    }
    return SymmetricFunction(q, d, t);
}

} // namespace

TEST_CASE("composition ranks follow sorted-tuple order")
{
    for (int q = 2; q <= 4; ++q)
        for (int d = 0; d <= 6; ++d) {
            const auto all = all_compositions(q, d);
            REQUIRE(all.size() == composition_count(q, d));
            std::vector<std::vector<int>> sorted;
            for (const auto& c : all) {
                std::vector<int> t;
                for (int i = 0; i < q; ++i)
                    t.insert(t.end(), c.counts[i], i);
                sorted.push_back(t);
            }
            CHECK(std::is_sorted(sorted.begin(), sorted.end()));
            for (std::uint32_t r = 0; r < all.size(); ++r) {
                CHECK(composition_rank(all[r]) == r);
                CHECK(composition_unrank(q, d, r) == all[r]);
            }
        }
    // q = 2 tables read [f_0, ..., f_d] by number of ones.
    CHECK(composition_rank(Composition({1, 2})) == 2);
}

TEST_CASE("pin examples")
{
    auto eq3 = boolean_fn({1, 0, 0, 1});
    CHECK(pin(eq3, Composition({0, 1})) == boolean_fn({0, 0, 1}));
    auto f = boolean_fn({1, 1, 0, 0});
    CHECK(pin(f, Composition({0, 0})) == f);

    // Potts edge function, q = 3.
    const Value lam(3);
    std::vector<Value> t;
    for (const auto& c : all_compositions(3, 2))
        t.push_back(*std::max_element(c.counts.begin(), c.counts.end()) == 2 ? lam : Value(1));
    SymmetricFunction potts(3, 2, t);
    auto g = pin(potts, Composition({1, 0, 0}));
    CHECK(g.arity() == 1);
    CHECK(g(Composition({1, 0, 0})) == lam);
    CHECK(g(Composition({0, 1, 0})) == Value(1));
    CHECK(g(Composition({0, 0, 1})) == Value(1));
    CHECK(g == pin_oracle(potts, Composition({1, 0, 0})));

    auto full = pin(eq3, Composition({0, 3}));
    CHECK(full.arity() == 0);
    CHECK(full.at(0) == Value(1));

    CHECK_THROWS_AS(pin(eq3, Composition({2, 2})), InvalidArgument);
    CHECK_THROWS_AS(pin(eq3, Composition({1, 0, 0})), InvalidArgument);
}

TEST_CASE("pin agrees with tuple enumeration and composes")
{
    unsigned seed = 7;
    for (int q = 2; q <= 3; ++q)
        for (int d = 0; d <= 5; ++d) {
            auto f = random_fn(q, d, seed);
            for (int k1 = 0; k1 <= d; ++k1)
                for (const auto& a : all_compositions(q, k1)) {
                    CHECK(pin(f, a) == pin_oracle(f, a));
                    for (int k2 = 0; k1 + k2 <= d; ++k2)
                        for (const auto& b : all_compositions(q, k2))
                            CHECK(pin(pin(f, a), b) == pin(f, a + b));
                }
        }
}

TEST_CASE("peer partition examples")
{
    auto p = peer_partition(boolean_fn({1, 0, 0, 1}), 1);
    CHECK(p.size() == 2);

    auto amo = builtin(BuiltinKind::at_most_one, 2, 4, {});
    CHECK(amo == boolean_fn({1, 1, 0, 0, 0}));
    p = peer_partition(amo, 2);
    REQUIRE(p.size() == 3);
    for (std::uint32_t r = 0; r < 3; ++r)
        CHECK(p.class_of[r] == r);
    CHECK(pin(amo, p.representatives[2]).is_identically_zero());

    auto one = SymmetricFunction::constant(3, 4, Value(1));
    for (int k = 0; k <= 4; ++k)
        CHECK(peer_partition(one, k).size() == 1);

    CHECK_THROWS_AS(peer_partition(amo, 5), InvalidArgument);
}

TEST_CASE("peer partitions are sound and exhaustive")
{
    unsigned seed = 99;
    for (int q = 2; q <= 3; ++q)
        for (int d = 0; d <= 5; ++d) {
            auto f = random_fn(q, d, seed);
            for (int k = 0; k <= d; ++k) {
                auto p = peer_partition(f, k);
                std::size_t total = 0;
                std::set<std::uint32_t> seen;
                for (std::size_t c = 0; c < p.size(); ++c) {
                    total += p.classes[c].size();
                    for (auto r : p.classes[c].ranks()) {
                        CHECK(seen.insert(r).second);
                        CHECK(p.class_of[r] == c);
                    }
                    CHECK(p.classes[c].ranks().front() == composition_rank(p.representatives[c]));
                }
                CHECK(total == composition_count(q, k));
                const auto all = all_compositions(q, k);
                for (const auto& a : all)
                    for (const auto& b : all) {
                        const bool same = p.class_of[composition_rank(a)] == p.class_of[composition_rank(b)];
                        CHECK(same == (pin(f, a) == pin(f, b)));
                    }
                CHECK(p.size() == distinct_pins_oracle(f, k));
            }
        }
}

TEST_CASE("regularity")
{
    for (int d = 3; d <= 8; ++d)
        CHECK(regularity(builtin(BuiltinKind::equality, 2, d, {})) == 3);
    // [1,0,1]: the two full pins coincide, as do the two end windows.
    CHECK(regularity(builtin(BuiltinKind::equality, 2, 2, {})) == 2);
    CHECK(regularity(builtin(BuiltinKind::equality, 2, 1, {})) == 1);
    CHECK(regularity(SymmetricFunction::constant(2, 0, Value(5))) == 1);

    BuiltinParams sw;
    sw.period = 2;
    sw.residue_values = {Value(1), Value(Rational(1, 3))};
    auto f = builtin(BuiltinKind::cyclic, 2, 5, sw);
    CHECK(f.to_string() == "1 1/3 1 1/3 1 1/3");
    CHECK(regularity(f) == 2);

    auto x1 = builtin(BuiltinKind::exact_one, 2, 4, {});
    CHECK(x1 == boolean_fn({0, 1, 0, 0, 0}));
    CHECK(regularity(x1) == 3);
    for (int d = 4; d <= 8; ++d)
        CHECK(regularity(builtin(BuiltinKind::at_most_one, 2, d, {})) == 3);

    unsigned seed = 3;
    for (int d = 0; d <= 5; ++d) {
        auto g = random_fn(3, d, seed);
        std::size_t best = 0;
        for (int k = 0; k <= d; ++k)
            best = std::max(best, distinct_pins_oracle(g, k));
        CHECK(regularity(g) == static_cast<int>(best));
        CHECK(static_cast<std::uint64_t>(regularity(g)) <= std::max<std::uint64_t>(1, composition_count(3, d)));
    }
}

TEST_CASE("peering closure")
{
    auto eq = boolean_fn({1, 0, 0, 1});
    auto c = peering_closure_at(eq, 1);
    REQUIRE(c.size() == 4);
    CHECK(c[0].empty());
    CHECK(c[3] == BooleanSymmetricFunction::full(2, 1));
    CHECK(peering_closure_at(SymmetricFunction::constant(2, 3, Value(1)), 2).size() == 2);
    CHECK(peering_closure_at(builtin(BuiltinKind::at_most_one, 2, 4, {}), 2).size() == 8);

    // Interning gives equal ids to equal sets only.
    std::set<std::uint32_t> ids;
    for (const auto& g : c)
        ids.insert(intern(g));
    CHECK(ids.size() == 4);
    CHECK(intern(c[1]) == intern(BooleanSymmetricFunction(2, 1, c[1].members())));
}

TEST_CASE("evaluate_by_peers")
{
    auto f = boolean_fn({1, 1, 0});
    std::vector<Composition> a{Composition({1, 0}), Composition({1, 0})};
    CHECK(evaluate_by_peers(f, a) == Value(1));
    std::vector<Composition> b{Composition({0, 1}), Composition({0, 1})};
    CHECK(evaluate_by_peers(f, b) == Value(0));
    auto eq = boolean_fn({1, 0, 0, 1});
    std::vector<Composition> c{Composition({1, 0}), Composition({0, 1}), Composition({0, 1})};
    CHECK(evaluate_by_peers(eq, c) == eq.eval_tuple(std::vector<int>{0, 1, 1}));
    std::vector<Composition> bad{Composition({1, 0})};
    CHECK_THROWS_AS(evaluate_by_peers(f, bad), InvalidArgument);
}

TEST_CASE("evaluate_by_peers is independent of representatives")
{
    unsigned seed = 11;
    for (int q = 2; q <= 3; ++q)
        for (int d = 1; d <= 6; ++d) {
            auto f = random_fn(q, d, seed);
            for (int k1 = 0; k1 <= d; ++k1) {
                const int k2 = d - k1;
                auto p1 = peer_partition(f, k1);
                auto p2 = peer_partition(f, k2);
                for (const auto& a : all_compositions(q, k1))
                    for (const auto& b : all_compositions(q, k2)) {
                        std::vector<Composition> reps{p1.representatives[p1.class_of[composition_rank(a)]],
                                                      p2.representatives[p2.class_of[composition_rank(b)]]};
                        CHECK(evaluate_by_peers(f, reps) == f(a + b));
                    }
            }
        }
}

TEST_CASE("builtins")
{
    CHECK(builtin(BuiltinKind::equality, 2, 3, {}) == boolean_fn({1, 0, 0, 1}));
    BuiltinParams w;
    w.weights = {Value(2), Value(3), Value(5)};
    auto eq = builtin(BuiltinKind::equality, 3, 2, w);
    CHECK(eq(Composition({2, 0, 0})) == Value(2));
    CHECK(eq(Composition({0, 0, 2})) == Value(5));
    CHECK(eq(Composition({1, 1, 0})) == Value(0));
    CHECK(builtin(BuiltinKind::equality, 3, 0, w).at(0) == Value(10));

    // cyclic over q = 3 with period 2: index n_1 mod 2 + 2 (n_2 mod 2).
    BuiltinParams cy;
    cy.period = 2;
    cy.residue_values = ints({1, 2, 3, 4});
    auto f = builtin(BuiltinKind::cyclic, 3, 3, cy);
    CHECK(f(Composition({3, 0, 0})) == Value(1));
    CHECK(f(Composition({2, 1, 0})) == Value(2));
    CHECK(f(Composition({2, 0, 1})) == Value(3));
    CHECK(f(Composition({1, 1, 1})) == Value(4));

    cy.exception_span = 1;
    cy.overrides.push_back({0, {0, 0}, Value(7)});
    cy.overrides.push_back({2, {1, 0}, Value(9)});
    auto g = builtin(BuiltinKind::cyclic_with_exceptions, 3, 3, cy);
    CHECK(g(Composition({3, 0, 0})) == Value(7));
    CHECK(g(Composition({1, 0, 2})) == Value(9));
    CHECK(g(Composition({1, 1, 1})) == Value(4));
    cy.overrides.push_back({1, {2, 0}, Value(1)});
    CHECK_THROWS_AS(builtin(BuiltinKind::cyclic_with_exceptions, 3, 3, cy), InvalidArgument);

    BuiltinParams tb;
    tb.table = ints({1, 2});
    CHECK(builtin(BuiltinKind::explicit_boolean_weights, 2, 1, tb) == boolean_fn({1, 2}));
    CHECK_THROWS_AS(builtin(BuiltinKind::explicit_boolean_weights, 3, 1, tb), InvalidArgument);
    CHECK_THROWS_AS(builtin(BuiltinKind::explicit_table, 2, 2, tb), InvalidArgument);
    CHECK_THROWS_AS(builtin(BuiltinKind::equality, 2, 2, w), InvalidArgument);
}

TEST_CASE("builtin parameters round-trip through text")
{
    std::vector<std::string> tok{"2", "1", "1/2", "3/4", "-1", "1", "1", "0", "0", "1", "5"};
    auto p = parse_builtin_params(BuiltinKind::cyclic_with_exceptions, 3, tok);
    CHECK(p.period == 2);
    CHECK(p.residue_values.size() == 4);
    CHECK(p.overrides.size() == 1);
    CHECK(format_builtin_params(BuiltinKind::cyclic_with_exceptions, 3, p) == tok);
    CHECK(parse_builtin_kind("exact_one") == BuiltinKind::exact_one);
    CHECK_THROWS_AS(parse_builtin_kind("nope"), InvalidArgument);
    std::vector<std::string> extra{"1"};
    CHECK_THROWS_AS(parse_builtin_params(BuiltinKind::at_most_one, 2, extra), InvalidArgument);
}

TEST_CASE("peer table steps match composition arithmetic")
{
    unsigned seed = 5;
    for (int q = 2; q <= 3; ++q) {
        auto f = random_fn(q, 4, seed);
        PeerTable t(f);
        for (int k = 0; k < 4; ++k)
            for (const auto& c : all_compositions(q, k))
                for (int x = 0; x < q; ++x) {
                    const auto cls = t.partition(k).class_of[composition_rank(c)];
                    Composition next = c;
                    ++next.counts[x];
                    CHECK(t.step(k, cls, x) == t.partition(k + 1).class_of[composition_rank(next)]);
                    CHECK(t.class_is_zero(k, cls) == pin(f, c).is_identically_zero());
                }
        for (const auto& c : all_compositions(q, 4))
            CHECK(t.full_value(t.partition(4).class_of[composition_rank(c)]) == f(c));
    }
}

TEST_CASE("values")
{
    CHECK(Value::parse("1/2+3/4i") == Value(Rational(1, 2), Rational(3, 4)));
    CHECK(Value::parse("-i") == Value(Rational(0), Rational(-1)));
    CHECK(Value::parse("1.25") == Value(Rational(5, 4)));
    CHECK(Value::parse(Value(Rational(-1, 3), Rational(2)).to_string()) == Value(Rational(-1, 3), Rational(2)));
    CHECK((Value(Rational(0), Rational(1)) * Value(Rational(0), Rational(1))) == Value(-1));
    CHECK(pow(Value(2), 10) == Value(1024));
    CHECK_THROWS_AS(Value(1) / Value(0), InvalidArgument);
    CHECK_THROWS_AS(Value::parse("1/0"), InvalidArgument);
    CHECK_THROWS_AS(Value::parse("x"), InvalidArgument);
}
