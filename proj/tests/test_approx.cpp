#include <doctest.h>

#include "holant/approx.hpp"
#include "holant/errors.hpp"
#include "holant/exact.hpp"
#include "oracles.hpp"

#include <random>

using namespace holant;

namespace {

HolantInstance matchings(const Graph& g, BuiltinKind kind = BuiltinKind::at_most_one)
{
    std::vector<SymmetricFunction> fs;
    for (int v = 0; v < g.n(); ++v)
        fs.push_back(builtin(kind, 2, g.degree(v), {}));
    return HolantInstance(g, 2, fs);
}

HolantInstance subgraphs_world(const Graph& g, const Value& lambda, const Value& mu)
{
    const int n = g.n();
    Graph h(n + g.m());
    for (int e = 0; e < g.m(); ++e) {
        h.add_edge(g.edge(e).first, n + e);
        h.add_edge(g.edge(e).second, n + e);
    }
    std::vector<SymmetricFunction> fs;
    for (int v = 0; v < n; ++v) {
        std::vector<Value> t;
        for (int k = 0; k <= g.degree(v); ++k)
            t.push_back(k % 2 ? mu : Value(1));
        fs.emplace_back(2, g.degree(v), t);
    }
    for (int e = 0; e < g.m(); ++e)
        fs.emplace_back(2, 2, std::vector<Value>{Value(1), Value(0), lambda});
    return HolantInstance(h, 2, fs);
}

Rational tv(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += abs(a[i] - b[i]);
    return s / 2;
}

HolantInstance random_nonnegative(std::mt19937& rng)
{
    const int q = 2 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 5);
    return oracle::random_instance(n, q == 2 ? 8 : 6, q, rng);
}

} // namespace

TEST_CASE("tractable search examples")
{
    auto potts = oracle::potts(oracle::cycle(4), 3, Value(2));
    PartialConfiguration any{{0, 2}, {3, 1}, {5, 0}};
    CHECK_FALSE(tractable_search(potts, any, "positive"));  // equality vertices have zeros
    auto c = tractable_search(potts, any, "greedy");
    REQUIRE(c);
    CHECK((*c)[0] == 2);
    CHECK((*c)[3] == 1);
    CHECK_FALSE(potts.weight(*c).is_zero());
    Graph k2(2, {{0, 1}});
    HolantInstance positive(k2, 2, {SymmetricFunction(2, 1, {Value(1), Value(2)}), SymmetricFunction(2, 1, {Value(3), Value(1)})});
    CHECK(tractable_search(positive, {{0, 1}}, "positive") == std::vector<int>{1});

    auto pm = matchings(oracle::path(3), BuiltinKind::exact_one);
    CHECK_FALSE(tractable_search(pm, {{0, 0}, {1, 0}}));
    for (const auto& name : search_plugins())
        CHECK_FALSE(tractable_search(pm, {{0, 0}, {1, 0}}, name));

    auto sw = subgraphs_world(oracle::cycle(3), Value(Rational(1, 2)), Value(Rational(1, 3)));
    c = tractable_search(sw, {}, "zero-fill");
    REQUIRE(c);
    CHECK(*c == std::vector<int>(sw.graph().m(), 0));
    CHECK_FALSE(tractable_search(sw, {}, "positive"));

    CHECK_THROWS_AS(tractable_search(sw, {}, "nope"), InvalidArgument);
    CHECK_THROWS_AS(tractable_search(sw, {{99, 0}}), InvalidArgument);
    CHECK_THROWS_AS(tractable_search(sw, {{0, 2}}), InvalidArgument);
}

TEST_CASE("tractable search agrees with enumeration")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        auto inst = random_nonnegative(rng);
        PartialConfiguration partial;
        for (int e = 0; e < inst.graph().m(); ++e)
            if (rng() % 3 == 0)
                partial[e] = static_cast<int>(rng() % inst.q());
        const bool expect = oracle::extendable(inst, partial);
        auto c = tractable_search(inst, partial);
        CHECK(c.has_value() == expect);
        CHECK(tractable_search(inst, partial, "indicator").has_value() == expect);
        for (const auto& name : search_plugins()) {
            auto r = tractable_search(inst, partial, name);
            if (!r)
                continue;
            CHECK(expect);
            CHECK_FALSE(inst.weight(*r).is_zero());
            for (auto [e, x] : partial)
                CHECK((*r)[e] == x);
        }
    }
}

TEST_CASE("marginals on the path")
{
    auto inst = matchings(oracle::path(5));
    auto whole = RadiusPolicy::whole_graph();
    CHECK(estimate_marginal(inst, 0, {}, 1, whole) == Rational(3, 8));
    CHECK(estimate_marginal(inst, 1, {}, 1, whole) == Rational(1, 4));
    CHECK(estimate_marginal(inst, 2, {}, 1, whole) == Rational(1, 4));
    CHECK(oracle::gibbs_marginal(inst, 0, {})[1] == Rational(3, 8));
    CHECK(estimate_marginal(inst, 1, {{0, 1}}, 1, whole) == 0);
    CHECK(estimate_marginal(inst, 1, {{1, 1}}, 1, whole) == 1);

    CHECK_THROWS_AS(estimate_marginals(inst, 1, {{0, 1}, {1, 1}}, whole), FailedPrecondition);
    CHECK_THROWS_AS(estimate_marginals(inst, 7, {}, whole), InvalidArgument);
    CHECK_THROWS_AS(estimate_marginals(inst, 0, {}, RadiusPolicy::adaptive()), InvalidArgument);
    CHECK_THROWS_AS(estimate_marginal(inst, 0, {}, 2, whole), InvalidArgument);
}

TEST_CASE("whole-graph marginals equal the Gibbs oracle")
{
    std::mt19937 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        auto inst = random_nonnegative(rng);
        if (inst.graph().m() == 0)
            continue;
        PartialConfiguration cond;
        for (int e = 0; e < inst.graph().m(); ++e)
            if (rng() % 4 == 0)
                cond[e] = static_cast<int>(rng() % inst.q());
        const int e = static_cast<int>(rng() % inst.graph().m());
        auto expect = oracle::gibbs_marginal(inst, e, cond);
        if (expect.empty()) {
            CHECK_THROWS_AS(estimate_marginals(inst, e, cond, RadiusPolicy::whole_graph()), FailedPrecondition);
            continue;
        }
        auto est = estimate_marginals(inst, e, cond, RadiusPolicy::whole_graph());
        CHECK(est.p == expect);
        CHECK(est.exact);
        ++checked;
    }
    CHECK(checked > 40);
}

TEST_CASE("truncated marginals are normalized")
{
    std::mt19937 rng(12);
    for (int trial = 0; trial < 60; ++trial) {
        auto inst = random_nonnegative(rng);
        if (inst.graph().m() == 0 || !tractable_search(inst, {}))
            continue;
        const int e = static_cast<int>(rng() % inst.graph().m());
        for (int r = 0; r <= 2; ++r) {
            auto est = estimate_marginals(inst, e, {}, RadiusPolicy::fixed(r));
            Rational s(0);
            for (const auto& p : est.p) {
                CHECK(sgn(p) >= 0);
                s += p;
            }
            CHECK(s == 1);
        }
    }
}

TEST_CASE("Potts marginals approach the exact value with the radius")
{
    const int q = 10;
    auto inst = oracle::potts(oracle::cycle(8), q, Value(Rational(12214, 10000)));
    PartialConfiguration cond{{0, 3}};
    const int e = 8;
    const auto exact = estimate_marginals(inst, e, cond, RadiusPolicy::whole_graph()).p;
    std::vector<Rational> err;
    for (int r = 1; r <= edge_eccentricity(inst.graph(), e); ++r)
        err.push_back(tv(estimate_marginals(inst, e, cond, RadiusPolicy::fixed(r)).p, exact));
    for (std::size_t i = 1; i < err.size(); ++i)
        CHECK(err[i] <= err[i - 1]);
    CHECK(err.back() == 0);
    CHECK(err.front() > 0);

    auto p2 = estimate_marginals(inst, e, cond, RadiusPolicy::fixed(2)).p;
    auto p3 = estimate_marginals(inst, e, cond, RadiusPolicy::fixed(3)).p;
    auto p4 = estimate_marginals(inst, e, cond, RadiusPolicy::fixed(4)).p;
    auto p5 = estimate_marginals(inst, e, cond, RadiusPolicy::fixed(5)).p;
    CHECK(tv(p2, p4) > tv(p3, p5));
}

TEST_CASE("adaptive radius")
{
    auto inst = oracle::potts(oracle::cycle(12), 3, Value(Rational(11, 10)));
    const int e = 0;
    auto est = estimate_marginals(inst, e, {}, RadiusPolicy::adaptive(Rational(1, 1000000)));
    CHECK(est.stabilized);
    CHECK(est.radii.front() == 1);
    for (std::size_t i = 1; i < est.radii.size(); ++i)
        CHECK(est.radii[i] == std::min(2 * est.radii[i - 1], edge_eccentricity(inst.graph(), e)));

    auto capped = estimate_marginals(inst, e, {{11, 2}}, RadiusPolicy::adaptive(Rational(1, 1000000000), 2));
    CHECK(capped.radius <= 2);
    CHECK_FALSE(capped.exact);
}

TEST_CASE("fptas with whole-graph radius is exact")
{
    std::mt19937 rng(31);
    int feasible = 0;
    for (int trial = 0; trial < 80; ++trial) {
        auto inst = random_nonnegative(rng);
        const Value exact = oracle::hol(inst);
        if (exact.is_zero()) {
            CHECK_THROWS_AS(fptas_hol(inst, Rational(1, 10), RadiusPolicy::whole_graph()), InfeasibleInstance);
            continue;
        }
        auto r = fptas_hol(inst, Rational(1, 10), RadiusPolicy::whole_graph());
        CHECK(r.value == exact);
        CHECK(r.tau.size() == static_cast<std::size_t>(inst.graph().m()));
        CHECK(r.p_min * inst.q() >= 1);
        ++feasible;
    }
    CHECK(feasible > 30);

    auto grid = matchings(oracle::grid(4, 4));
    CHECK(fptas_hol(grid, Rational(1, 10), RadiusPolicy::whole_graph()).value == simple_dp_hol(grid));
}

TEST_CASE("fptas argmax, threads and errors")
{
    auto inst = oracle::potts(oracle::cycle(5), 3, Value(Rational(3, 2)));
    auto a = fptas_hol(inst, Rational(1, 10), RadiusPolicy::whole_graph());
    CHECK(a.tau.front() == 0);  // uniform first marginal: smallest value wins
    CHECK(a.p.front() == Rational(1, 3));
    ApproxOptions four;
    four.threads = 4;
    auto b = fptas_hol(inst, Rational(1, 10), RadiusPolicy::whole_graph(), four);
    CHECK(a.value == b.value);
    CHECK(a.tau == b.tau);

    auto adaptive = fptas_hol(inst, Rational(1, 10));
    CHECK(adaptive.delta_stab == Rational(1, 10) / (8 * 3 * inst.graph().m()));
    const double rel = adaptive.value.re().get_d() / simple_dp_hol(inst).re().get_d() - 1;
    CHECK(std::abs(rel) <= 0.1);

    Graph e(2, {{0, 1}});
    HolantInstance neg(e, 2, {SymmetricFunction(2, 1, {Value(1), Value(-1)}), SymmetricFunction(2, 1, {Value(1), Value(1)})});
    CHECK_THROWS_AS(fptas_hol(neg, Rational(1, 10)), InvalidArgument);
    CHECK_THROWS_AS(fptas_hol(inst, Rational(0)), InvalidArgument);
}

TEST_CASE("subgraphs world gate")
{
    auto r = gate_subgraphs_world(1, Rational(1, 2), Rational(1, 2));
    REQUIRE(r.threshold_exact);
    CHECK(*r.threshold_exact == Rational(27, 16));
    CHECK(r.satisfied);
    CHECK_FALSE(gate_subgraphs_world(2, Rational(1, 2), Rational(1, 2)).satisfied);
    auto big = gate_subgraphs_world(15, Rational(9, 10), Rational(9, 10));
    CHECK(big.satisfied);
    CHECK(*big.threshold_exact == Rational(157339, 10000));
    CHECK_FALSE(gate_subgraphs_world(16, Rational(9, 10), Rational(9, 10)).satisfied);
    CHECK_THROWS_AS(gate_subgraphs_world(3, Rational(1, 2), Rational(1)), InvalidArgument);
    CHECK_THROWS_AS(gate_subgraphs_world(3, Rational(0), Rational(1, 2)), InvalidArgument);
}

TEST_CASE("Potts gates")
{
    auto r = gate_potts_beta(3, 10, Rational(1, 5));
    CHECK(r.satisfied);
    CHECK(r.form == "beta");
    CHECK(std::abs(r.threshold_value - std::log(4.0) / 4) < 1e-12);
    CHECK_FALSE(gate_potts_beta(3, 10, Rational(34658, 100000)).satisfied);
    CHECK(gate_potts_beta(3, 10, Rational(34657, 100000)).satisfied);
    CHECK_FALSE(gate_potts_beta(3, 3, Rational(1, 100)).satisfied);  // ln(1/2) < 0

    auto l = gate_potts_lambda(3, 3, Rational(2));
    CHECK_FALSE(l.satisfied);
    CHECK(*l.threshold_exact == 16);
    CHECK(gate_potts_lambda(3, 3, Rational(1000001, 1000000)).satisfied);
    CHECK_THROWS_AS(gate_potts_lambda(3, 3, Rational(1)), InvalidArgument);
    CHECK_THROWS_AS(gate_potts_beta(3, 10, Rational(-1, 5)), InvalidArgument);
    CHECK_THROWS_AS(gate_potts_lambda(3, 2, Rational(2)), InvalidArgument);
    CHECK(to_text(r).rfind("satisfied: yes threshold: 0.3465735902799726547", 0) == 0);
}

TEST_CASE("colorings gate")
{
    CHECK(gate_colorings(4, 8).satisfied);
    CHECK(*gate_colorings(4, 8).threshold_exact == Rational(658257, 100000));
    CHECK(gate_colorings(4, 8).threshold == "6.58257");
    CHECK(gate_colorings(2, 4).threshold == "3.05613");
    CHECK_FALSE(gate_colorings(4, 6).satisfied);
    CHECK(gate_colorings(2, 4).satisfied);
    CHECK(gate_colorings(2, 4).note.find("triangle-free") != std::string::npos);
    CHECK_THROWS_AS(gate_colorings(1, 4), InvalidArgument);
}

TEST_CASE("Ising gate matches the subgraphs world gate")
{
    for (const char* b : {"1/10", "3/10", "1"})
        for (const char* f : {"1/20", "1/10", "1/2"}) {
            const Rational beta(b), field(f);
            auto ising = gate_ising(2, beta, field);
            // tanh as a rational from a 30-digit decimal expansion.
            auto tanh_rational = [](const Rational& x) {
                const double t = std::tanh(x.get_d());
                Rational r(static_cast<long>(t * 1e15), 1000000000000000L);
                r.canonicalize();
                return r;
            };
            auto sw = gate_subgraphs_world(2, tanh_rational(beta), tanh_rational(field));
            CHECK(ising.threshold_value == doctest::Approx(sw.threshold_value).epsilon(1e-9));
            for (int d = 1; d <= 20; ++d)
                if (std::abs(d - ising.threshold_value) > 1e-6)
                    CHECK(gate_ising(d, beta, field).satisfied == gate_subgraphs_world(d, tanh_rational(beta), tanh_rational(field)).satisfied);
        }
    auto r = gate_ising(3, Rational(1, 10), Rational(0));
    CHECK(r.form == "interval");
    bool has_a = false;
    for (const auto& [k, v] : r.parameters)
        has_a = has_a || k == "a";
    CHECK(has_a);
    CHECK_THROWS_AS(gate_ising(3, Rational(0), Rational(1, 10)), InvalidArgument);
}
