#include "holant/workbench.hpp"

#include "holant/errors.hpp"
#include "holant/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace holant {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::matchings: return "matchings";
    case ModelKind::perfect_matchings: return "perfect_matchings";
    case ModelKind::weighted_matchings: return "weighted_matchings";
    case ModelKind::colorings: return "colorings";
    case ModelKind::potts: return "potts";
    case ModelKind::subgraphs_world: return "subgraphs_world";
    case ModelKind::ising: return "ising";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name)
{
    for (auto k : {ModelKind::matchings, ModelKind::perfect_matchings, ModelKind::weighted_matchings,
                   ModelKind::colorings, ModelKind::potts, ModelKind::subgraphs_world, ModelKind::ising})
        if (to_string(k) == name)
            return k;
    throw InvalidArgument("unknown model '" + name + "'");
}

// ---------------------------------------------------------------------------
// Rational approximants

namespace {

class Real {
public:
    explicit Real(int prec) { mpfr_init2(x_, prec); }
    ~Real() { mpfr_clear(x_); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    mpfr_ptr get() { return x_; }

private:
    mpfr_t x_;
};

using MpfrFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

// f(x) to within 2^-bits. The working precision covers the integer part of
// the result (|f(x)| <= e^|x| for exp, cosh and tanh).
Rational approximate(MpfrFn fn, const Rational& x, int bits)
{
    if (bits < 1)
        throw InvalidArgument("approximant precision must be positive");
    const double mag = std::abs(x.get_d());
    if (mag > 1e6)
        throw InvalidArgument("approximant argument too large");
    const int prec = bits + 64 + static_cast<int>(std::ceil(mag * 1.5));
    Real in(prec), out(prec);
    mpfr_set_q(in.get(), x.get_mpq_t(), MPFR_RNDN);
    fn(out.get(), in.get(), MPFR_RNDN);
    Rational exact;
    mpfr_get_q(exact.get_mpq_t(), out.get());
    return rational_approximant(exact, bits + 1);
}

} // namespace

Rational rational_approximant(const Rational& x, int bits)
{
    if (bits < 1)
        throw InvalidArgument("approximant precision must be positive");
    Rational tol(1);
    tol /= Rational(mpz_class(1) << bits);
    // Convergents h/k of the continued fraction of x.
    mpz_class h0 = 1, h1 = 0, k0 = 0, k1 = 1;
    mpz_class num = x.get_num(), den = x.get_den();
    while (true) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        mpz_class h = a * h0 + h1, k = a * k0 + k1;
        h1 = h0;
        h0 = h;
        k1 = k0;
        k0 = k;
        Rational c(h, k);
        c.canonicalize();
        if (abs(c - x) <= tol)
            return c;
        mpz_class r = num - a * den;
        num = den;
        den = r;
    }
}

Rational exp_approximant(const Rational& x, int bits) { return approximate(mpfr_exp, x, bits); }
Rational tanh_approximant(const Rational& x, int bits) { return approximate(mpfr_tanh, x, bits); }
Rational cosh_approximant(const Rational& x, int bits) { return approximate(mpfr_cosh, x, bits); }

Value ising_prefactor(const Graph& graph, const Rational& beta, const Rational& field, int bits)
{
    const Rational cb = cosh_approximant(beta, bits), cf = cosh_approximant(field, bits);
    Value m = pow(Value(2), graph.n());
    m *= pow(Value(cb), graph.m());
    m *= pow(Value(cf), graph.n());
    return m;
}

// ---------------------------------------------------------------------------
// Models

namespace {

Rational required(const std::optional<Rational>& v, const char* name, ModelKind kind)
{
    if (!v)
        throw InvalidArgument(to_string(kind) + ": parameter " + name + " is required");
    return *v;
}

FunctionLiteral builtin_literal(BuiltinKind kind, BuiltinParams p = {})
{
    return {kind, std::move(p)};
}

FunctionLiteral table_literal(std::vector<Value> t)
{
    FunctionLiteral f;
    f.params.table = std::move(t);
    return f;
}

// Binary q-ary table: `same` on equal arguments, `diff` otherwise.
FunctionLiteral edge_table(int q, const Value& same, const Value& diff)
{
    std::vector<Value> t;
    for (const auto& c : all_compositions(q, 2))
        t.push_back(*std::max_element(c.counts.begin(), c.counts.end()) == 2 ? same : diff);
    return table_literal(std::move(t));
}

// Incidence layout of incidence_transform: v keeps index v, edge e is n + e.
Graph incidence_graph(const Graph& g)
{
    Graph h(g.n() + g.m());
    for (int e = 0; e < g.m(); ++e) {
        h.add_edge(g.edge(e).first, g.n() + e);
        h.add_edge(g.edge(e).second, g.n() + e);
    }
    return h;
}

InstanceFile subgraphs_file(const Graph& g, const Rational& lambda, const Rational& mu)
{
    InstanceFile f;
    f.q = 2;
    f.graph = incidence_graph(g);
    BuiltinParams p;
    p.period = 2;
    p.residue_values = {Value(1), Value(mu)};
    for (int v = 0; v < g.n(); ++v)
        f.functions.push_back(builtin_literal(BuiltinKind::cyclic, p));
    for (int e = 0; e < g.m(); ++e)
        f.functions.push_back(table_literal({Value(1), Value(0), Value(lambda)}));
    return f;
}

std::string describe(const ModelSpec& s)
{
    std::string d = to_string(s.kind);
    auto add = [&](const char* name, const std::optional<Rational>& v) {
        if (v)
            d += std::string(" ") + name + "=" + rational_to_string(*v);
    };
    if (s.kind == ModelKind::colorings || s.kind == ModelKind::potts)
        d += " q=" + std::to_string(s.q);
    add("lambda", s.lambda);
    add("mu", s.mu);
    add("beta", s.beta);
    add("field", s.field);
    return d;
}

} // namespace

InstanceFile model_file(const ModelSpec& spec, const Graph& g)
{
    InstanceFile f;
    const ModelKind kind = spec.kind;
    switch (kind) {
    case ModelKind::matchings:
    case ModelKind::perfect_matchings:
        f.q = 2;
        f.graph = g;
        for (int v = 0; v < g.n(); ++v)
            f.functions.push_back(
                builtin_literal(kind == ModelKind::matchings ? BuiltinKind::at_most_one : BuiltinKind::exact_one));
        break;
    case ModelKind::weighted_matchings: {
        if (!spec.edge_weights.empty() && static_cast<int>(spec.edge_weights.size()) != g.m())
            throw InvalidArgument("weighted_matchings: " + std::to_string(spec.edge_weights.size())
                                  + " weights for " + std::to_string(g.m()) + " edges");
        f.q = 2;
        f.graph = incidence_graph(g);
        for (int v = 0; v < g.n(); ++v)
            f.functions.push_back(builtin_literal(BuiltinKind::at_most_one));
        for (int e = 0; e < g.m(); ++e) {
            const Rational w = spec.edge_weights.empty() ? Rational(1) : spec.edge_weights[e];
            if (sgn(w) < 0)
                throw InvalidArgument("weighted_matchings: negative weight on edge " + std::to_string(e));
            f.functions.push_back(table_literal({Value(1), Value(0), Value(w)}));
        }
        break;
    }
    case ModelKind::colorings:
    case ModelKind::potts: {
        if (spec.q < 2)
            throw InvalidArgument(to_string(kind) + ": q must be at least 2");
        Rational lambda(0);
        if (kind == ModelKind::potts) {
            if (spec.lambda)
                lambda = *spec.lambda;
            else
                lambda = exp_approximant(required(spec.beta, "lambda or beta", kind), spec.precision_bits);
            if (lambda <= 1)
                throw InvalidArgument("potts: ferromagnetic lambda must exceed 1");
        }
        f.q = spec.q;
        f.graph = incidence_graph(g);
        BuiltinParams p;
        p.weights.assign(spec.q, Value(1));
        for (int v = 0; v < g.n(); ++v)
            f.functions.push_back(builtin_literal(BuiltinKind::equality, p));
        for (int e = 0; e < g.m(); ++e)
            f.functions.push_back(edge_table(spec.q, Value(lambda), Value(1)));
        break;
    }
    case ModelKind::subgraphs_world: {
        const Rational lambda = required(spec.lambda, "lambda", kind), mu = required(spec.mu, "mu", kind);
        if (sgn(lambda) <= 0 || sgn(mu) <= 0)
            throw InvalidArgument("subgraphs_world: lambda and mu must be positive");
        f = subgraphs_file(g, lambda, mu);
        break;
    }
    case ModelKind::ising: {
        const Rational beta = required(spec.beta, "beta", kind);
        const Rational field = spec.field.value_or(Rational(0));
        if (sgn(beta) <= 0 || sgn(field) < 0)
            throw InvalidArgument("ising: need beta > 0 and field >= 0");
        f = subgraphs_file(g, tanh_approximant(beta, spec.precision_bits),
                           tanh_approximant(field, spec.precision_bits));
        break;
    }
    }
    f.model = describe(spec);
    return f;
}

HolantInstance build_model(const ModelSpec& spec, const Graph& graph) { return model_file(spec, graph).instance(); }

// ---------------------------------------------------------------------------
// Gibbs oracle

namespace {

void check_budget(const HolantInstance& inst, int free_edges)
{
    const double bits = free_edges * std::log2(static_cast<double>(inst.q()));
    if (bits > enumeration_cap_bits() + 1e-9)
        throw ResourceExhausted("gibbs oracle needs " + std::to_string(inst.q()) + "^" + std::to_string(free_edges)
                                + " configurations, above the 2^" + std::to_string(enumeration_cap_bits())
                                + " budget");
}

// Calls fn(config, weight) for every configuration agreeing with `fixed`.
template <class Fn>
void enumerate(const HolantInstance& inst, const PartialConfiguration& fixed, Fn fn)
{
    const int m = inst.graph().m(), q = inst.q();
    std::vector<int> config(m, 0), free;
    for (int e = 0; e < m; ++e) {
        auto it = fixed.find(e);
        if (it == fixed.end())
            free.push_back(e);
        else
            config[e] = it->second;
    }
    check_budget(inst, static_cast<int>(free.size()));
    while (true) {
        fn(config, inst.weight(config));
        std::size_t i = 0;
        while (i < free.size() && ++config[free[i]] == q)
            config[free[i++]] = 0;
        if (i == free.size())
            return;
    }
}

} // namespace

std::vector<Value> gibbs_marginal(const HolantInstance& inst, int e, const PartialConfiguration& cond)
{
    if (e < 0 || e >= inst.graph().m())
        throw InvalidArgument("edge " + std::to_string(e) + " out of range");
    for (auto [f, x] : cond)
        if (f < 0 || f >= inst.graph().m() || x < 0 || x >= inst.q())
            throw InvalidArgument("conditioning entry " + std::to_string(f) + "=" + std::to_string(x)
                                  + " out of range");
    std::vector<Value> mass(inst.q());
    Value total(0);
    enumerate(inst, cond, [&](const std::vector<int>& config, const Value& w) {
        mass[config[e]] += w;
        total += w;
    });
    if (total.is_zero())
        throw FailedPrecondition("conditioning event has zero mass");
    for (auto& x : mass)
        x /= total;
    return mass;
}

std::vector<GibbsEntry> gibbs_distribution(const HolantInstance& inst)
{
    std::vector<GibbsEntry> out;
    Value total(0);
    enumerate(inst, {}, [&](const std::vector<int>& config, const Value& w) {
        if (w.is_zero())
            return;
        total += w;
        out.push_back({config, w});
    });
    if (total.is_zero())
        throw FailedPrecondition("instance has zero total weight");
    for (auto& x : out)
        x.probability /= total;
    return out;
}

// ---------------------------------------------------------------------------
// Instance files

namespace {

SymmetricFunction literal_function(const FunctionLiteral& lit, int q, int d)
{
    if (lit.kind)
        return builtin(*lit.kind, q, d, lit.params);
    const auto need = composition_count(q, d);
    if (lit.params.table.size() != need)
        throw InvalidArgument("table has " + std::to_string(lit.params.table.size()) + " values, arity "
                              + std::to_string(d) + " needs " + std::to_string(need));
    return SymmetricFunction(q, d, lit.params.table);
}

} // namespace

HolantInstance InstanceFile::instance() const
{
    if (static_cast<int>(functions.size()) != graph.n())
        throw InvalidArgument(std::to_string(functions.size()) + " functions for " + std::to_string(graph.n())
                              + " vertices");
    std::vector<SymmetricFunction> fs;
    fs.reserve(functions.size());
    for (int v = 0; v < graph.n(); ++v) {
        try {
            fs.push_back(literal_function(functions[v], q, graph.degree(v)));
        } catch (const InvalidArgument& err) {
            throw InvalidArgument("vertex " + std::to_string(v) + ": " + err.what());
        }
    }
    return HolantInstance(graph, q, std::move(fs));
}

InstanceFile InstanceFile::from_instance(const HolantInstance& inst, std::string model)
{
    InstanceFile f;
    f.q = inst.q();
    f.graph = inst.graph();
    for (const auto& fn : inst.functions())
        f.functions.push_back(table_literal(fn.table()));
    f.model = std::move(model);
    return f;
}

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// Whitespace tokens; a lone `i` joins the previous token so that `1/2+1/3 i`
// reads as one value.
std::vector<std::string> tokens(const std::string& line)
{
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) {
        if (t == "i" && !out.empty())
            out.back() += " i";
        else
            out.push_back(t);
    }
    return out;
}

int to_int(const std::string& s, const std::string& what)
{
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw InvalidArgument("expected integer " + what + ", got '" + s + "'");
    return v;
}

} // namespace

InstanceFile parse_instance_file(std::istream& in)
{
    InstanceFile f;
    bool header = false, have_q = false, have_n = false;
    std::map<int, std::pair<int, FunctionLiteral>> funcs;  // vertex -> (line, literal)
    std::string raw;
    int lineno = 0;
    auto fail = [&](const std::string& msg) { return InvalidArgument("line " + std::to_string(lineno) + ": " + msg); };
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        const auto tok = tokens(line);
        const std::string& kw = tok[0];
        try {
            if (!header) {
                if (kw != "holant" || tok.size() != 2)
                    throw fail("expected 'holant <version>' header");
                f.version = to_int(tok[1], "version");
                if (f.version != 1)
                    throw fail("unsupported format version " + tok[1]);
                header = true;
            } else if (kw == "q") {
                if (tok.size() != 2 || have_q)
                    throw fail("expected a single 'q <int>' line");
                f.q = to_int(tok[1], "q");
                if (f.q < 2)
                    throw fail("q must be at least 2");
                have_q = true;
            } else if (kw == "vertices") {
                if (tok.size() != 2 || have_n)
                    throw fail("expected a single 'vertices <n>' line");
                const int n = to_int(tok[1], "vertex count");
                if (n < 0)
                    throw fail("negative vertex count");
                f.graph = Graph(n);
                have_n = true;
            } else if (kw == "edge") {
                if (!have_n)
                    throw fail("'edge' before 'vertices'");
                if (tok.size() != 3)
                    throw fail("expected 'edge <u> <v>'");
                f.graph.add_edge(to_int(tok[1], "vertex"), to_int(tok[2], "vertex"));
            } else if (kw == "function") {
                if (tok.size() < 3)
                    throw fail("expected 'function <v> builtin|table ...'");
                const int v = to_int(tok[1], "vertex");
                if (!have_n || v < 0 || v >= f.graph.n())
                    throw fail("function for unknown vertex " + tok[1]);
                if (funcs.count(v))
                    throw fail("second function for vertex " + tok[1]);
                FunctionLiteral lit;
                if (tok[2] == "builtin") {
                    if (tok.size() < 4)
                        throw fail("builtin without a kind");
                    if (!have_q)
                        throw fail("'function' before 'q'");
                    lit.kind = parse_builtin_kind(tok[3]);
                    lit.params = parse_builtin_params(*lit.kind, f.q, std::span(tok).subspan(4));
                } else if (tok[2] == "table") {
                    for (std::size_t i = 3; i < tok.size(); ++i)
                        lit.params.table.push_back(Value::parse(tok[i]));
                } else {
                    throw fail("expected 'builtin' or 'table', got '" + tok[2] + "'");
                }
                funcs.emplace(v, std::make_pair(lineno, std::move(lit)));
            } else if (kw == "model") {
                f.model = trim(line.substr(5));
            } else {
                throw fail("unknown keyword '" + kw + "'");
            }
        } catch (const InvalidArgument& err) {
            const std::string msg = err.what();
            if (msg.rfind("line ", 0) == 0)
                throw;
            throw fail(msg);
        }
    }
    if (!header)
        throw InvalidArgument("empty instance file");
    if (!have_q || !have_n)
        throw InvalidArgument("missing 'q' or 'vertices' line");
    for (int v = 0; v < f.graph.n(); ++v) {
        auto it = funcs.find(v);
        if (it == funcs.end())
            throw InvalidArgument("vertex " + std::to_string(v) + " has no function");
        f.functions.push_back(it->second.second);
    }
    // Arities are only known once every edge is read.
    for (int v = 0; v < f.graph.n(); ++v) {
        try {
            (void)literal_function(f.functions[v], f.q, f.graph.degree(v));
        } catch (const InvalidArgument& err) {
            throw InvalidArgument("line " + std::to_string(funcs.at(v).first) + ": vertex " + std::to_string(v)
                                  + ": " + err.what());
        }
    }
    return f;
}

InstanceFile parse_instance_file(const std::string& text)
{
    std::istringstream is(text);
    return parse_instance_file(is);
}

std::string serialize(const InstanceFile& f)
{
    std::ostringstream os;
    os << "holant " << f.version << "\n";
    os << "q " << f.q << "\n";
    os << "vertices " << f.graph.n() << "\n";
    if (!f.model.empty())
        os << "model " << f.model << "\n";
    for (auto [u, v] : f.graph.edges())
        os << "edge " << u << " " << v << "\n";
    for (std::size_t v = 0; v < f.functions.size(); ++v) {
        const FunctionLiteral& lit = f.functions[v];
        os << "function " << v;
        if (lit.kind) {
            os << " builtin " << to_string(*lit.kind);
            for (const auto& t : format_builtin_params(*lit.kind, f.q, lit.params))
                os << " " << t;
        } else {
            os << " table";
            for (const auto& x : lit.params.table)
                os << " " << x;
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Graph generators

Graph prism_graph()
{
    return Graph(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}});
}

Graph cube_graph()
{
    Graph g(8);
    for (int v = 0; v < 8; ++v)
        for (int b = 0; b < 3; ++b)
            if (int u = v ^ (1 << b); u > v)
                g.add_edge(v, u);
    return g;
}

namespace {

struct Pt {
    long long x, y;
};

long long orient(const Pt& a, const Pt& b, const Pt& c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

bool on_segment(const Pt& a, const Pt& b, const Pt& p)
{
    return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x)
           && std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int sign(long long v) { return (v > 0) - (v < 0); }

// Segments ab and cd meet somewhere other than a shared endpoint.
bool conflict(const Pt& a, const Pt& b, const Pt& c, const Pt& d, bool shared)
{
    const int o1 = sign(orient(a, b, c)), o2 = sign(orient(a, b, d));
    const int o3 = sign(orient(c, d, a)), o4 = sign(orient(c, d, b));
    if (shared)
        return o1 == 0 && o2 == 0 && (on_segment(a, b, c) + on_segment(a, b, d) + on_segment(c, d, a)
                                      + on_segment(c, d, b)) > 2;
    if (o1 != o2 && o3 != o4 && o1 * o2 <= 0 && o3 * o4 <= 0)
        return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a))
           || (o4 == 0 && on_segment(c, d, b));
}

} // namespace

Graph random_planar_graph(int n, unsigned seed, int max_degree)
{
    if (n < 0)
        throw InvalidArgument("randplanar: negative vertex count");
    std::mt19937 rng(seed);
    const long long side = 4LL * std::max(n, 1);
    std::vector<Pt> pts;
    while (static_cast<int>(pts.size()) < n) {
        Pt p{static_cast<long long>(rng() % side), static_cast<long long>(rng() % side)};
        bool dup = false;
        for (const auto& o : pts)
            dup |= o.x == p.x && o.y == p.y;
        if (!dup)
            pts.push_back(p);
    }
    std::vector<std::pair<long long, std::pair<int, int>>> cand;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const long long dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
            cand.push_back({dx * dx + dy * dy, {i, j}});
        }
    std::sort(cand.begin(), cand.end());
    Graph g(n);
    for (const auto& [len, ij] : cand) {
        const auto [i, j] = ij;
        if (max_degree > 0 && (g.degree(i) >= max_degree || g.degree(j) >= max_degree))
            continue;
        bool ok = true;
        for (int k = 0; k < n && ok; ++k)
            if (k != i && k != j && on_segment(pts[i], pts[j], pts[k]))
                ok = false;
        for (auto [u, v] : g.edges()) {
            if (!ok)
                break;
            const bool shared = u == i || u == j || v == i || v == j;
            ok = !conflict(pts[i], pts[j], pts[u], pts[v], shared);
        }
        if (ok)
            g.add_edge(i, j);
    }
    return g;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Graph read_edge_list(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open edge list '" + path + "'");
    std::vector<std::pair<int, int>> edges;
    int n = 0, lineno = 0;
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        const auto tok = tokens(line);
        if (tok.size() != 2)
            throw InvalidArgument("line " + std::to_string(lineno) + ": expected '<u> <v>'");
        const int u = to_int(tok[0], "vertex"), v = to_int(tok[1], "vertex");
        if (u < 0 || v < 0)
            throw InvalidArgument("line " + std::to_string(lineno) + ": negative vertex");
        edges.emplace_back(u, v);
        n = std::max({n, u + 1, v + 1});
    }
    return Graph(n, edges);
}

} // namespace

Graph make_graph(const std::string& desc)
{
    if (desc.rfind("edges:", 0) == 0)
        return read_edge_list(desc.substr(6));
    const auto part = split(desc, ':');
    const std::string& name = part[0];
    auto arg = [&](std::size_t i) {
        if (i >= part.size())
            throw InvalidArgument("graph '" + desc + "': missing parameter");
        return to_int(part[i], "graph parameter");
    };
    auto arity = [&](std::size_t k) {
        if (part.size() != k + 1)
            throw InvalidArgument("graph '" + desc + "': expected " + std::to_string(k) + " parameter(s)");
    };
    if (name == "prism" || name == "cube") {
        arity(0);
        return name == "prism" ? prism_graph() : cube_graph();
    }
    if (name == "path" || name == "cycle" || name == "complete") {
        arity(1);
        const int n = arg(1);
        if (n < (name == "cycle" ? 3 : 0))
            throw InvalidArgument("graph '" + desc + "': too few vertices");
        Graph g(n);
        if (name == "complete") {
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    g.add_edge(u, v);
            return g;
        }
        for (int i = 0; i + 1 < n; ++i)
            g.add_edge(i, i + 1);
        if (name == "cycle")
            g.add_edge(n - 1, 0);
        return g;
    }
    if (name == "grid") {
        arity(1);
        const auto rc = split(part[1], 'x');
        if (rc.size() != 2)
            throw InvalidArgument("graph '" + desc + "': expected grid:RxC");
        const int r = to_int(rc[0], "rows"), c = to_int(rc[1], "columns");
        if (r < 1 || c < 1)
            throw InvalidArgument("graph '" + desc + "': empty grid");
        Graph g(r * c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                if (j + 1 < c)
                    g.add_edge(i * c + j, i * c + j + 1);
                if (i + 1 < r)
                    g.add_edge(i * c + j, (i + 1) * c + j);
            }
        return g;
    }
    if (name == "randplanar") {
        if (part.size() != 3 && part.size() != 4)
            throw InvalidArgument("graph '" + desc + "': expected randplanar:n:seed[:maxdeg]");
        return random_planar_graph(arg(1), static_cast<unsigned>(arg(2)), part.size() == 4 ? arg(3) : 0);
    }
    throw InvalidArgument("unknown graph '" + desc + "'");
}

} // namespace holant
