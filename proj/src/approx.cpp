#include "holant/approx.hpp"

#include "holant/errors.hpp"
#include "holant/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <exception>
#include <set>
#include <thread>

namespace holant {

RadiusPolicy RadiusPolicy::fixed(int r)
{
    if (r < 0)
        throw InvalidArgument("radius must be nonnegative");
    RadiusPolicy p;
    p.mode = Mode::fixed;
    p.r_fixed = r;
    return p;
}

RadiusPolicy RadiusPolicy::adaptive(Rational delta, int r_cap)
{
    if (sgn(delta) < 0)
        throw InvalidArgument("stabilization tolerance must be positive");
    RadiusPolicy p;
    p.mode = Mode::adaptive;
    p.delta_stab = std::move(delta);
    p.r_cap = r_cap;
    return p;
}

RadiusPolicy RadiusPolicy::whole_graph() { return fixed(INT_MAX / 2); }

namespace {

void check_partial(const HolantInstance& inst, const PartialConfiguration& partial)
{
    for (auto [e, x] : partial) {
        if (e < 0 || e >= inst.graph().m())
            throw InvalidArgument("partial configuration names edge " + std::to_string(e) + " which does not exist");
        if (x < 0 || x >= inst.q())
            throw InvalidArgument("value " + std::to_string(x) + " on edge " + std::to_string(e) + " is outside [q]");
    }
}

void require_nonnegative(const HolantInstance& inst)
{
    for (int v = 0; v < inst.graph().n(); ++v)
        if (!inst.function(v).is_nonnegative_real())
            throw InvalidArgument("approximation needs nonnegative rational values; vertex " + std::to_string(v)
                                  + " has others");
}

std::vector<int> fill_zero(const HolantInstance& inst, const PartialConfiguration& partial)
{
    std::vector<int> config(inst.graph().m(), 0);
    for (auto [e, x] : partial)
        config[e] = x;
    return config;
}

std::optional<std::vector<int>> accept_if_feasible(const HolantInstance& inst, std::vector<int> config)
{
    if (inst.weight(config).is_zero())
        return std::nullopt;
    return config;
}

std::optional<std::vector<int>> search_positive(const HolantInstance& inst, const PartialConfiguration& partial)
{
    for (int v = 0; v < inst.graph().n(); ++v)
        for (const Value& x : inst.function(v).table())
            if (x.is_zero())
                return std::nullopt;
    return fill_zero(inst, partial);
}

std::optional<std::vector<int>> search_zero_fill(const HolantInstance& inst, const PartialConfiguration& partial)
{
    return accept_if_feasible(inst, fill_zero(inst, partial));
}

// Free edges in index order take the smallest value after which neither
// endpoint's pinned function is identically zero. May dead-end.
std::optional<std::vector<int>> search_greedy(const HolantInstance& inst, const PartialConfiguration& partial)
{
    const Graph& g = inst.graph();
    PeerCache cache;
    std::vector<const PeerTable*> t(g.n());
    std::vector<int> k(g.n(), 0);
    std::vector<std::uint32_t> cls(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
        t[v] = &cache.of(inst.function(v));
    auto pin = [&](int v, int x) { return t[v]->step(k[v], cls[v], x); };
    auto assign = [&](int e, int x) {
        for (int v : {g.edge(e).first, g.edge(e).second}) {
            cls[v] = pin(v, x);
            ++k[v];
        }
    };
    std::vector<int> config(g.m(), -1);
    for (auto [e, x] : partial) {
        config[e] = x;
        assign(e, x);
    }
    for (int v = 0; v < g.n(); ++v)
        if (t[v]->class_is_zero(k[v], cls[v]))
            return std::nullopt;
    for (int e = 0; e < g.m(); ++e) {
        if (config[e] >= 0)
            continue;
        const auto [a, b] = g.edge(e);
        int chosen = -1;
        for (int x = 0; x < inst.q() && chosen < 0; ++x)
            if (!t[a]->class_is_zero(k[a] + 1, pin(a, x)) && !t[b]->class_is_zero(k[b] + 1, pin(b, x)))
                chosen = x;
        if (chosen < 0)
            return std::nullopt;
        config[e] = chosen;
        assign(e, chosen);
    }
    return accept_if_feasible(inst, std::move(config));
}

// Exact: pins free edges one at a time, testing that the support indicator
// of the instance still has a positive Holant.
std::optional<std::vector<int>> search_indicator(const HolantInstance& inst, const PartialConfiguration& partial)
{
    const Graph& g = inst.graph();
    std::vector<SymmetricFunction> fs;
    for (int v = 0; v < g.n(); ++v) {
        std::vector<Value> t;
        for (const Value& x : inst.function(v).table())
            t.emplace_back(x.is_zero() ? 0 : 1);
        fs.emplace_back(inst.q(), g.degree(v), std::move(t));
    }
    HolantInstance support(g, inst.q(), std::move(fs));
    PartialConfiguration fixed = partial;
    auto feasible = [&]() {
        std::vector<int> keep;
        for (int e = 0; e < g.m(); ++e)
            if (!fixed.count(e))
                keep.push_back(e);
        SubInstance sub = restrict_instance(support, fixed, keep);
        if (sub.scalar.is_zero())
            return false;
        return !fpt_hol(sub.local).is_zero();
    };
    if (!feasible())
        return std::nullopt;
    for (int e = 0; e < g.m(); ++e) {
        if (fixed.count(e))
            continue;
        bool found = false;
        for (int x = 0; x < inst.q() && !found; ++x) {
            fixed[e] = x;
            found = feasible();
        }
        if (!found)
            return std::nullopt;
    }
    std::vector<int> config(g.m());
    for (auto [e, x] : fixed)
        config[e] = x;
    return accept_if_feasible(inst, std::move(config));
}

using Plugin = std::optional<std::vector<int>> (*)(const HolantInstance&, const PartialConfiguration&);

Plugin plugin_named(const std::string& name)
{
    if (name == "positive")
        return search_positive;
    if (name == "zero-fill")
        return search_zero_fill;
    if (name == "greedy")
        return search_greedy;
    if (name == "indicator")
        return search_indicator;
    throw InvalidArgument("unknown search plugin '" + name + "'");
}

Rational total_variation(const std::vector<Rational>& a, const std::vector<Rational>& b)
{
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += abs(a[i] - b[i]);
    return s / 2;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(int count, int threads, Fn fn)
{
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += threads)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& err : errors)
        if (err)
            std::rethrow_exception(err);
}

struct BallResult {
    std::vector<Rational> p;
    bool whole = false;
};

BallResult ball_marginals(const HolantInstance& inst, int e, const PartialConfiguration& cond,
                          const std::vector<int>& fill, int r, const ApproxOptions& opt, PeerCache& cache)
{
    const Graph& g = inst.graph();
    const int q = inst.q();
    BallResult out;
    const int ecc = edge_eccentricity(g, e);
    out.whole = r >= ecc;
    const EdgeBall ball = edge_ball(g, e, std::min(r, ecc));

    PartialConfiguration fixed;
    std::vector<int> keep;
    for (int f : ball.inner) {
        if (auto it = cond.find(f); it != cond.end())
            fixed.emplace(f, it->second);
        else if (f != e)
            keep.push_back(f);
    }
    for (int f : ball.boundary) {
        auto it = cond.find(f);
        fixed.emplace(f, it != cond.end() ? it->second : fill[f]);
    }

    std::vector<SubInstance> subs;
    for (int i = 0; i < q; ++i) {
        fixed[e] = i;
        subs.push_back(restrict_instance(inst, fixed, keep));
    }
    const auto dec = find_min_width(subs[0].local.graph(), opt.s_cap).decomposition;
    std::vector<Value> num(q);
    parallel_for(q, opt.threads, [&](int i) {
        if (subs[i].scalar.is_zero())
            return;
        num[i] = subs[i].scalar * fpt_hol(subs[i].local, dec, {}, nullptr, &cache);
    });
    Value den(0);
    for (const Value& v : num)
        den += v;
    if (den.is_zero())
        throw InfeasibleBoundary("ball of radius " + std::to_string(r) + " around edge " + std::to_string(e)
                                 + " has zero weight under the boundary fill");
    for (const Value& v : num)
        out.p.push_back(v.re() / den.re());
    return out;
}

MarginalEstimate marginals_impl(const HolantInstance& inst, int e, const PartialConfiguration& cond,
                                const RadiusPolicy& policy, const ApproxOptions& opt, PeerCache& cache)
{
    const Graph& g = inst.graph();
    if (e < 0 || e >= g.m())
        throw InvalidArgument("edge " + std::to_string(e) + " does not exist");
    check_partial(inst, cond);
    MarginalEstimate est;
    auto completion = tractable_search(inst, cond, opt.search);
    if (!completion)
        throw FailedPrecondition("conditioning admits no feasible completion");
    if (auto it = cond.find(e); it != cond.end()) {
        est.p.assign(inst.q(), Rational(0));
        est.p[it->second] = 1;
        est.exact = est.stabilized = true;
        return est;
    }

    const int ecc = edge_eccentricity(g, e);
    if (policy.mode == RadiusPolicy::Mode::fixed) {
        auto b = ball_marginals(inst, e, cond, *completion, policy.r_fixed, opt, cache);
        est.p = std::move(b.p);
        est.radius = std::min(policy.r_fixed, ecc);
        est.radii.push_back(est.radius);
        est.exact = est.stabilized = b.whole;
        return est;
    }
    if (sgn(policy.delta_stab) <= 0)
        throw InvalidArgument("adaptive radius needs a positive stabilization tolerance");
    const int cap = policy.r_cap < 0 ? ecc : std::min(policy.r_cap, ecc);
    // Stable means two consecutive doublings within delta_stab: a single
    // comparison can see a plateau where a boundary pin passes unchanged
    // through a hard constraint (an equality vertex makes radii r and r+1
    // coincide on incidence instances).
    int r = std::min(1, cap);
    auto b = ball_marginals(inst, e, cond, *completion, r, opt, cache);
    est.radii.push_back(r);
    int calm = 0;
    while (!b.whole && r < cap) {
        const int next = std::min(2 * std::max(r, 1), cap);
        auto nb = ball_marginals(inst, e, cond, *completion, next, opt, cache);
        est.radii.push_back(next);
        est.gap = total_variation(b.p, nb.p);
        b = std::move(nb);
        r = next;
        calm = est.gap <= policy.delta_stab ? calm + 1 : 0;
        if (calm == 2) {
            est.stabilized = true;
            break;
        }
    }
    est.p = std::move(b.p);
    est.radius = r;
    est.exact = b.whole;
    est.stabilized = est.stabilized || b.whole;
    return est;
}

} // namespace

const std::vector<std::string>& search_plugins()
{
    static const std::vector<std::string> names{"positive", "zero-fill", "greedy", "indicator"};
    return names;
}

std::optional<std::vector<int>> tractable_search(const HolantInstance& inst, const PartialConfiguration& partial,
                                                 const std::string& plugin)
{
    check_partial(inst, partial);
    if (plugin != "auto")
        return plugin_named(plugin)(inst, partial);
    for (const auto& name : search_plugins())
        if (auto c = plugin_named(name)(inst, partial))
            return c;
    return std::nullopt;
}

MarginalEstimate estimate_marginals(const HolantInstance& inst, int e, const PartialConfiguration& cond,
                                    const RadiusPolicy& policy, const ApproxOptions& opt)
{
    require_nonnegative(inst);
    PeerCache cache;
    return marginals_impl(inst, e, cond, policy, opt, cache);
}

Rational estimate_marginal(const HolantInstance& inst, int e, const PartialConfiguration& cond, int value,
                           const RadiusPolicy& policy, const ApproxOptions& opt)
{
    if (value < 0 || value >= inst.q())
        throw InvalidArgument("value " + std::to_string(value) + " is outside [q]");
    return estimate_marginals(inst, e, cond, policy, opt).p[value];
}

FptasResult fptas_hol(const HolantInstance& inst, const Rational& eps, const RadiusPolicy& policy,
                      const ApproxOptions& opt)
{
    if (sgn(eps) <= 0)
        throw InvalidArgument("eps must be positive");
    require_nonnegative(inst);
    const Graph& g = inst.graph();
    const int q = inst.q();
    const int m = g.m();
    if (!tractable_search(inst, {}, opt.search))
        throw InfeasibleInstance("no configuration of positive weight");

    RadiusPolicy pol = policy;
    FptasResult res;
    if (pol.mode == RadiusPolicy::Mode::adaptive && sgn(pol.delta_stab) == 0 && m > 0)
        pol.delta_stab = eps / (8 * q * m);
    res.delta_stab = pol.delta_stab;

    PeerCache cache;
    PartialConfiguration pins;
    bool all_stable = true;
    Value denom(1);
    for (int e = 0; e < m; ++e) {
        auto est = marginals_impl(inst, e, pins, pol, opt, cache);
        int best = 0;
        for (int i = 1; i < q; ++i)
            if (est.p[i] > est.p[best])
                best = i;
        pins[e] = best;
        res.tau.push_back(best);
        res.p.push_back(est.p[best]);
        res.stabilized.push_back(est.stabilized);
        all_stable = all_stable && est.stabilized;
        res.p_min = std::min(res.p_min, est.p[best]);
        res.max_gap = std::max(res.max_gap, est.gap);
        res.max_radius = std::max(res.max_radius, est.radius);
        denom *= Value(est.p[best]);
    }
    res.value = inst.weight(res.tau) / denom;
    res.certified = all_stable && res.p_min * (2 * q) >= 1;
    return res;
}

// ---------------------------------------------------------------------------
// Gates

namespace {

class Real {
public:
    explicit Real(int prec) { mpfr_init2(x_, prec); }
    ~Real() { mpfr_clear(x_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

private:
    mpfr_t x_;
};

std::string decimal(mpfr_srcptr x)
{
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.20Rg", x);
    return buf;
}

// Exact decimal when the denominator is 2^a 5^b, otherwise a/b.
std::string decimal(const Rational& r)
{
    mpz_class den = r.get_den();
    int twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1)
        return r.get_str();
    const int digits = std::max(twos, fives);
    mpz_class scaled = r.get_num();
    for (int i = 0; i < digits; ++i)
        scaled *= 10;
    scaled /= r.get_den();
    std::string s = mpz_class(abs(scaled)).get_str();
    if (static_cast<int>(s.size()) <= digits)
        s.insert(0, digits + 1 - s.size(), '0');
    if (digits > 0)
        s.insert(s.size() - digits, ".");
    return (sgn(scaled) < 0 ? "-" : "") + s;
}

// e^x rounded in direction rnd, x exact.
void exp_of(mpfr_ptr out, const Rational& x, mpfr_rnd_t rnd)
{
    mpfr_set_q(out, x.get_mpq_t(), rnd);
    mpfr_exp(out, out, rnd);
}

// Ising threshold bounded in direction rnd (RNDD lower, RNDU upper).
void ising_threshold(mpfr_ptr out, const Rational& beta, const Rational& field, mpfr_rnd_t rnd, int prec)
{
    const mpfr_rnd_t inv = rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD;
    Real a(prec), b(prec), c(prec), num(prec), den(prec), t(prec);
    exp_of(a.get(), 2 * beta + 4 * field, rnd);
    exp_of(b.get(), 2 * beta, rnd);
    exp_of(c.get(), 2 * field, rnd);
    mpfr_mul_ui(c.get(), c.get(), 2, rnd);
    mpfr_add(num.get(), a.get(), b.get(), rnd);
    mpfr_add(num.get(), num.get(), c.get(), rnd);
    mpfr_sqr(num.get(), num.get(), rnd);

    exp_of(den.get(), 2 * field, inv);
    exp_of(t.get(), 2 * beta, inv);
    mpfr_add_ui(t.get(), t.get(), 1, inv);
    mpfr_sqr(t.get(), t.get(), inv);
    mpfr_mul(den.get(), den.get(), t.get(), inv);
    exp_of(t.get(), 2 * field, inv);
    mpfr_add_ui(t.get(), t.get(), 1, inv);
    mpfr_sqr(t.get(), t.get(), inv);
    mpfr_mul(den.get(), den.get(), t.get(), inv);
    mpfr_div(out, num.get(), den.get(), rnd);
}

} // namespace

SsmGateReport gate_subgraphs_world(int delta, const Rational& lambda, const Rational& mu)
{
    if (!(sgn(lambda) > 0 && lambda < 1 && sgn(mu) > 0 && mu < 1))
        throw InvalidArgument("subgraphs world gate needs 0 < lambda, mu < 1");
    SsmGateReport r;
    r.model = "subgraphs_world";
    r.form = "exact";
    r.parameters = {{"delta", std::to_string(delta)}, {"lambda", lambda.get_str()}, {"mu", mu.get_str()}};
    Rational a = 1 + lambda * mu * mu;
    Rational t = a * a / (1 - mu * mu);
    t.canonicalize();
    r.threshold_exact = t;
    r.threshold = t.get_str();
    r.threshold_value = t.get_d();
    r.satisfied = Rational(delta) < t;
    return r;
}

SsmGateReport gate_ising(int delta, const Rational& beta, const Rational& field, int prec)
{
    if (sgn(beta) <= 0)
        throw InvalidArgument("Ising gate needs beta > 0");
    if (prec < MPFR_PREC_MIN)
        throw InvalidArgument("precision too small");
    SsmGateReport r;
    r.model = "ising";
    r.form = "interval";
    Real lo(prec), hi(prec), a(prec), b(prec), lam(prec), mu(prec), t(prec);
    ising_threshold(lo.get(), beta, field, MPFR_RNDD, prec);
    ising_threshold(hi.get(), beta, field, MPFR_RNDU, prec);
    exp_of(a.get(), 2 * beta, MPFR_RNDN);
    exp_of(b.get(), 2 * field, MPFR_RNDN);
    mpfr_set_q(t.get(), beta.get_mpq_t(), MPFR_RNDN);
    mpfr_tanh(lam.get(), t.get(), MPFR_RNDN);
    mpfr_set_q(t.get(), field.get_mpq_t(), MPFR_RNDN);
    mpfr_tanh(mu.get(), t.get(), MPFR_RNDN);
    r.parameters = {{"delta", std::to_string(delta)},
                    {"beta", beta.get_str()},
                    {"B", field.get_str()},
                    {"a", decimal(a.get())},
                    {"b", decimal(b.get())},
                    {"lambda", decimal(lam.get())},
                    {"mu", decimal(mu.get())}};
    r.threshold = decimal(lo.get());
    r.threshold_value = mpfr_get_d(lo.get(), MPFR_RNDD);
    r.satisfied = mpfr_cmp_si(lo.get(), delta) > 0;
    r.note = "threshold interval [" + decimal(lo.get()) + ", " + decimal(hi.get()) + "]";
    return r;
}

SsmGateReport gate_potts_lambda(int delta, int q, const Rational& lambda)
{
    if (!(lambda > 1))
        throw InvalidArgument("Potts gate needs a ferromagnetic lambda > 1");
    if (q < 3 || delta < 2)
        throw InvalidArgument("Potts gate needs q >= 3 and delta >= 2");
    SsmGateReport r;
    r.model = "potts";
    r.form = "lambda";
    r.parameters = {{"delta", std::to_string(delta)}, {"q", std::to_string(q)}, {"lambda", lambda.get_str()}};
    Rational rhs = (lambda - 1) * (delta - 1);
    for (int i = 0; i < delta; ++i)
        rhs *= lambda;
    rhs.canonicalize();
    r.threshold_exact = rhs;
    r.threshold = rhs.get_str();
    r.threshold_value = rhs.get_d();
    r.satisfied = Rational(q - 2) > rhs;
    r.note = "compares q - 2 = " + std::to_string(q - 2) + " against the threshold";
    return r;
}

SsmGateReport gate_potts_beta(int delta, int q, const Rational& beta, int prec)
{
    if (sgn(beta) <= 0)
        throw InvalidArgument("Potts gate needs a ferromagnetic beta > 0");
    if (q < 3 || delta < 2)
        throw InvalidArgument("Potts gate needs q >= 3 and delta >= 2");
    if (prec < MPFR_PREC_MIN)
        throw InvalidArgument("precision too small");
    SsmGateReport r;
    r.model = "potts";
    r.form = "beta";
    r.parameters = {{"delta", std::to_string(delta)}, {"q", std::to_string(q)}, {"beta", beta.get_str()}};
    Real lo(prec), hi(prec);
    Rational ratio(q - 2, delta - 1);
    ratio.canonicalize();
    for (auto [x, rnd] : {std::pair{lo.get(), MPFR_RNDD}, std::pair{hi.get(), MPFR_RNDU}}) {
        mpfr_set_q(x, ratio.get_mpq_t(), rnd);
        mpfr_log(x, x, rnd);
        mpfr_div_ui(x, x, static_cast<unsigned long>(delta + 1), rnd);
    }
    r.threshold = decimal(lo.get());
    r.threshold_value = mpfr_get_d(lo.get(), MPFR_RNDD);
    r.satisfied = mpfr_cmp_q(lo.get(), beta.get_mpq_t()) > 0;
    r.note = "sufficient beta form; threshold interval [" + decimal(lo.get()) + ", " + decimal(hi.get()) + "]";
    return r;
}

SsmGateReport gate_colorings(int delta, int q)
{
    if (q < 2 || delta < 2)
        throw InvalidArgument("colorings gate needs q >= 2 and delta >= 2");
    SsmGateReport r;
    r.model = "colorings";
    r.form = "exact";
    const Rational alpha(176322, 100000), gamma(47031, 100000);
    r.parameters = {{"delta", std::to_string(delta)},
                    {"q", std::to_string(q)},
                    {"alpha", "1.76322"},
                    {"gamma", "0.47031"}};
    Rational t = alpha * delta - gamma;
    t.canonicalize();
    r.threshold_exact = t;
    r.threshold = decimal(t);
    r.threshold_value = t.get_d();
    r.satisfied = Rational(q) > t;
    r.note = "assumes a triangle-free graph; not verified";
    return r;
}

std::string to_text(const SsmGateReport& r)
{
    std::string s = "satisfied: " + std::string(r.satisfied ? "yes" : "no") + " threshold: " + r.threshold + "\n";
    s += "model: " + r.model + "\nform: " + r.form + "\n";
    for (const auto& [k, v] : r.parameters)
        s += k + ": " + v + "\n";
    if (!r.note.empty())
        s += "note: " + r.note + "\n";
    return s;
}

} // namespace holant
