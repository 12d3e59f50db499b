#include "holant/errors.hpp"
#include "holant/symfun.hpp"

namespace holant {

namespace {

int ipow(int base, int e)
{
    long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
        if (r > (1 << 20))
            throw InvalidArgument("cyclic residue table too large");
    }
    return static_cast<int>(r);
}

std::size_t residue_index(const Composition& c, int period)
{
    std::size_t idx = 0, scale = 1;
    for (int i = 1; i < c.q(); ++i) {
        idx += static_cast<std::size_t>(c.counts[i] % period) * scale;
        scale *= static_cast<std::size_t>(period);
    }
    return idx;
}

SymmetricFunction cyclic_base(int q, int d, const BuiltinParams& p)
{
    if (p.period < 1)
        throw InvalidArgument("cyclic: period must be positive");
    const auto need = static_cast<std::size_t>(ipow(p.period, q - 1));
    if (p.residue_values.size() != need)
        throw InvalidArgument("cyclic: expected " + std::to_string(need) + " residue values, got "
                              + std::to_string(p.residue_values.size()));
    auto comps = all_compositions(q, d);
    std::vector<Value> t;
    t.reserve(comps.size());
    for (const auto& c : comps)
        t.push_back(p.residue_values[residue_index(c, p.period)]);
    return SymmetricFunction(q, d, std::move(t));
}

} // namespace

SymmetricFunction builtin(BuiltinKind kind, int q, int d, const BuiltinParams& p)
{
    if (q < 2)
        throw InvalidArgument("domain size must be at least 2");
    if (d < 0)
        throw InvalidArgument("negative arity");
    switch (kind) {
    case BuiltinKind::equality: {
        std::vector<Value> w = p.weights;
        if (w.empty())
            w.assign(q, Value(1));
        if (static_cast<int>(w.size()) != q)
            throw InvalidArgument("equality: expected " + std::to_string(q) + " weights");
        auto t = std::vector<Value>(composition_count(q, d), Value(0));
        if (d == 0) {
            // The empty tuple is constant in every color.
            Value s(0);
            for (const auto& x : w)
                s += x;
            t[0] = s;
        } else {
            for (int i = 0; i < q; ++i) {
                Composition c = Composition::zero(q);
                c.counts[i] = d;
                t[composition_rank(c)] = w[i];
            }
        }
        return SymmetricFunction(q, d, std::move(t));
    }
    case BuiltinKind::at_most_one:
    case BuiltinKind::exact_one: {
        auto comps = all_compositions(q, d);
        std::vector<Value> t;
        t.reserve(comps.size());
        for (const auto& c : comps) {
            const int nonzero = d - c.counts[0];
            const bool ok = kind == BuiltinKind::at_most_one ? nonzero <= 1 : nonzero == 1;
            t.emplace_back(ok ? 1 : 0);
        }
        return SymmetricFunction(q, d, std::move(t));
    }
    case BuiltinKind::cyclic:
        return cyclic_base(q, d, p);
    case BuiltinKind::cyclic_with_exceptions: {
        SymmetricFunction base = cyclic_base(q, d, p);
        std::vector<Value> t = base.table();
        for (const auto& o : p.overrides) {
            if (o.color < 0 || o.color >= q || static_cast<int>(o.rest.size()) != q - 1)
                throw InvalidArgument("cyclic_with_exceptions: malformed override");
            int rest = 0;
            for (int r : o.rest) {
                if (r < 0)
                    throw InvalidArgument("cyclic_with_exceptions: negative override count");
                rest += r;
            }
            if (rest > p.exception_span)
                throw InvalidArgument("cyclic_with_exceptions: override exceeds exception span");
            if (rest > d)
                continue;
            Composition c = Composition::zero(q);
            c.counts[o.color] = d - rest;
            for (int i = 0, j = 0; i < q; ++i)
                if (i != o.color)
                    c.counts[i] = o.rest[j++];
            t[composition_rank(c)] = o.value;
        }
        return SymmetricFunction(q, d, std::move(t));
    }
    case BuiltinKind::explicit_boolean_weights:
        if (q != 2)
            throw InvalidArgument("explicit_boolean_weights requires q = 2");
        [[fallthrough]];
    case BuiltinKind::explicit_table:
        return SymmetricFunction(q, d, p.table);
    }
    throw InvalidArgument("unknown builtin kind");
}

std::string to_string(BuiltinKind kind)
{
    switch (kind) {
    case BuiltinKind::equality: return "equality";
    case BuiltinKind::at_most_one: return "at_most_one";
    case BuiltinKind::exact_one: return "exact_one";
    case BuiltinKind::cyclic: return "cyclic";
    case BuiltinKind::cyclic_with_exceptions: return "cyclic_with_exceptions";
    case BuiltinKind::explicit_boolean_weights: return "explicit_boolean_weights";
    case BuiltinKind::explicit_table: return "explicit_table";
    }
    return "?";
}

BuiltinKind parse_builtin_kind(const std::string& name)
{
    for (auto k : {BuiltinKind::equality, BuiltinKind::at_most_one, BuiltinKind::exact_one, BuiltinKind::cyclic,
                   BuiltinKind::cyclic_with_exceptions, BuiltinKind::explicit_boolean_weights,
                   BuiltinKind::explicit_table})
        if (to_string(k) == name)
            return k;
    throw InvalidArgument("unknown builtin kind '" + name + "'");
}

namespace {

int parse_int(const std::string& s, const char* what)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size())
            throw InvalidArgument("");
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("expected integer ") + what + ", got '" + s + "'");
    }
}

} // namespace

BuiltinParams parse_builtin_params(BuiltinKind kind, int q, std::span<const std::string> tok)
{
    BuiltinParams p;
    std::size_t i = 0;
    auto need = [&](std::size_t n) {
        if (i + n > tok.size())
            throw InvalidArgument("builtin " + to_string(kind) + ": too few parameters");
    };
    switch (kind) {
    case BuiltinKind::equality:
        for (; i < tok.size(); ++i)
            p.weights.push_back(Value::parse(tok[i]));
        break;
    case BuiltinKind::at_most_one:
    case BuiltinKind::exact_one:
        break;
    case BuiltinKind::cyclic:
    case BuiltinKind::cyclic_with_exceptions: {
        need(1);
        p.period = parse_int(tok[i++], "period");
        if (p.period < 1)
            throw InvalidArgument("cyclic: period must be positive");
        const auto n = static_cast<std::size_t>(ipow(p.period, q - 1));
        need(n);
        for (std::size_t j = 0; j < n; ++j)
            p.residue_values.push_back(Value::parse(tok[i++]));
        if (kind == BuiltinKind::cyclic)
            break;
        need(2);
        p.exception_span = parse_int(tok[i++], "exception span");
        const int count = parse_int(tok[i++], "override count");
        for (int c = 0; c < count; ++c) {
            need(static_cast<std::size_t>(q) + 1);
            ExtremeOverride o;
            o.color = parse_int(tok[i++], "override color");
            for (int j = 0; j < q - 1; ++j)
                o.rest.push_back(parse_int(tok[i++], "override count"));
            o.value = Value::parse(tok[i++]);
            p.overrides.push_back(std::move(o));
        }
        break;
    }
    case BuiltinKind::explicit_boolean_weights:
    case BuiltinKind::explicit_table:
        for (; i < tok.size(); ++i)
            p.table.push_back(Value::parse(tok[i]));
        break;
    }
    if (i != tok.size())
        throw InvalidArgument("builtin " + to_string(kind) + ": unexpected trailing parameters");
    return p;
}

std::vector<std::string> format_builtin_params(BuiltinKind kind, int q, const BuiltinParams& p)
{
    std::vector<std::string> out;
    switch (kind) {
    case BuiltinKind::equality:
        for (const auto& w : p.weights)
            out.push_back(w.to_string());
        break;
    case BuiltinKind::at_most_one:
    case BuiltinKind::exact_one:
        break;
    case BuiltinKind::cyclic:
    case BuiltinKind::cyclic_with_exceptions:
        out.push_back(std::to_string(p.period));
        for (const auto& v : p.residue_values)
            out.push_back(v.to_string());
        if (kind == BuiltinKind::cyclic)
            break;
        out.push_back(std::to_string(p.exception_span));
        out.push_back(std::to_string(p.overrides.size()));
        for (const auto& o : p.overrides) {
            out.push_back(std::to_string(o.color));
            for (int r : o.rest)
                out.push_back(std::to_string(r));
            out.push_back(o.value.to_string());
        }
        break;
    case BuiltinKind::explicit_boolean_weights:
    case BuiltinKind::explicit_table:
        for (const auto& v : p.table)
            out.push_back(v.to_string());
        break;
    }
    (void)q;
    return out;
}

} // namespace holant
