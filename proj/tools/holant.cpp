// holant: command-line front end for the solvers.
//
//   holant model matchings --graph grid:3x3 | holant exact --method fpt
//
// Exit codes: 0 success, 2 invalid input, 3 resource exhausted.

#include "holant/approx.hpp"
#include "holant/errors.hpp"
#include "holant/exact.hpp"
#include "holant/sepdecomp.hpp"
#include "holant/workbench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace holant;

namespace {

InstanceFile read_input(const std::string& path)
{
    if (path.empty() || path == "-")
        return parse_instance_file(std::cin);
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open '" + path + "'");
    return parse_instance_file(in);
}

std::optional<Rational> opt_rational(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    return parse_rational(s);
}

std::vector<Rational> rational_list(const std::string& s)
{
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_rational(item));
    return out;
}

PartialConfiguration parse_cond(const std::string& list)
{
    PartialConfiguration c;
    std::stringstream ss(list);
    std::string it;
    while (std::getline(ss, it, ',')) {
        const auto eq = it.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("conditioning entry '" + it + "' is not <edge>=<value>");
        try {
            c[std::stoi(it.substr(0, eq))] = std::stoi(it.substr(eq + 1));
        } catch (const std::logic_error&) {
            throw InvalidArgument("conditioning entry '" + it + "' is not <edge>=<value>");
        }
    }
    return c;
}

RadiusPolicy parse_radius(const std::string& s, const std::string& delta)
{
    if (s == "adaptive")
        return RadiusPolicy::adaptive(delta.empty() ? Rational(0) : parse_rational(delta));
    if (s == "whole")
        return RadiusPolicy::whole_graph();
    if (s.rfind("fixed:", 0) == 0) {
        try {
            return RadiusPolicy::fixed(std::stoi(s.substr(6)));
        } catch (const std::logic_error&) {
        }
    }
    throw InvalidArgument("radius must be adaptive, whole or fixed:<r>, got '" + s + "'");
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and approximate Holant partition functions"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "Worker threads for the approximate solver")->check(CLI::PositiveNumber);

    // model
    auto* model = app.add_subcommand("model", "Build a model instance and print it as an instance file");
    std::string kind, graph_desc, q_str = "2", lambda, mu, beta, field, weights;
    int precision = 128;
    model->add_option("kind", kind, "matchings, perfect_matchings, weighted_matchings, colorings, potts, "
                                    "subgraphs_world or ising")
        ->required();
    model->add_option("--graph", graph_desc, "path:n, cycle:n, grid:RxC, complete:n, prism, cube, "
                                             "randplanar:n:seed[:maxdeg] or edges:<file>")
        ->required();
    model->add_option("--q", q_str, "Number of values (colorings, potts)");
    model->add_option("--lambda", lambda);
    model->add_option("--mu", mu);
    model->add_option("--beta", beta);
    model->add_option("--field", field, "Ising external field B");
    model->add_option("--weights", weights, "Comma separated edge weights (weighted_matchings)");
    model->add_option("--precision", precision, "Bits of the rational approximants")->check(CLI::PositiveNumber);

    // exact
    auto* exact = app.add_subcommand("exact", "Compute hol exactly");
    std::string input, method = "fpt";
    int sep_width = 8;
    bool stats_flag = false;
    exact->add_option("input", input, "Instance file, '-' or omitted for stdin");
    exact->add_option("--method", method)->check(CLI::IsMember({"brute", "simple", "fpt"}));
    exact->add_option("--sep-width", sep_width, "Largest separator size tried by fpt")->check(CLI::PositiveNumber);
    exact->add_flag("--stats", stats_flag, "Print solver statistics to stderr");

    // approx
    auto* approx = app.add_subcommand("approx", "Approximate hol by self-reduction over local marginals");
    std::string eps = "1/10", radius = "adaptive", search = "auto", delta_stab;
    approx->add_option("input", input, "Instance file, '-' or omitted for stdin");
    approx->add_option("--eps", eps, "Target relative error");
    approx->add_option("--radius", radius, "adaptive, whole or fixed:<r>");
    approx->add_option("--delta-stab", delta_stab, "Stabilization tolerance (default eps/(8qm))");
    approx->add_option("--model-search", search, "tractable_search plugin or auto");
    approx->add_option("--sep-width", sep_width, "Separator cap for the ball decompositions")
        ->check(CLI::PositiveNumber);

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Print a separator decomposition of the instance graph");
    decompose->add_option("input", input, "Instance file, '-' or omitted for stdin");
    decompose->add_option("--graph", graph_desc, "Decompose a generated graph instead");
    decompose->add_option("--sep-width", sep_width, "Largest separator size tried")->check(CLI::PositiveNumber);

    // gate
    auto* gate = app.add_subcommand("gate", "Check a spatial mixing condition");
    std::string gate_model;
    int delta = 3;
    gate->add_option("model", gate_model)->required()->check(
        CLI::IsMember({"potts", "colorings", "subgraphs_world", "ising"}));
    gate->add_option("--delta", delta, "Maximum degree")->required();
    gate->add_option("--q", q_str);
    gate->add_option("--lambda", lambda);
    gate->add_option("--mu", mu);
    gate->add_option("--beta", beta);
    gate->add_option("--field", field);
    gate->add_option("--precision", precision, "Interval precision in bits")->check(CLI::PositiveNumber);

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact Gibbs quantities by enumeration");
    int edge = -1;
    std::string cond;
    bool distribution = false;
    oracle->add_option("input", input, "Instance file, '-' or omitted for stdin");
    oracle->add_option("--edge", edge, "Print the marginal of this edge");
    oracle->add_option("--cond", cond, "Comma separated conditioning entries <edge>=<value>");
    oracle->add_flag("--distribution", distribution, "Print every configuration of nonzero weight");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (model->parsed()) {
            ModelSpec s;
            s.kind = parse_model_kind(kind);
            s.q = std::stoi(q_str);
            s.lambda = opt_rational(lambda);
            s.mu = opt_rational(mu);
            s.beta = opt_rational(beta);
            s.field = opt_rational(field);
            if (!weights.empty())
                s.edge_weights = rational_list(weights);
            s.precision_bits = precision;
            InstanceFile f = model_file(s, make_graph(graph_desc));
            f.model += " graph=" + graph_desc;
            std::cout << serialize(f);
        } else if (exact->parsed()) {
            const HolantInstance inst = read_input(input).instance();
            Value v;
            if (method == "brute") {
                v = brute_force_hol(inst);
            } else if (method == "simple") {
                v = simple_dp_hol(inst);
            } else {
                auto r = find_min_width(inst.graph(), sep_width);
                FptStats st;
                v = fpt_hol(inst, r.decomposition, {}, stats_flag ? &st : nullptr);
                if (stats_flag)
                    std::cerr << "separator size " << r.s_used << ", width " << r.decomposition.width() << ", nodes "
                              << r.decomposition.size() << "\nterms " << st.terms << ", base solves "
                              << st.base_solves << ", memo entries " << st.memo_entries << ", max images "
                              << st.max_images << "\n";
            }
            std::cout << v << "\n";
        } else if (approx->parsed()) {
            const HolantInstance inst = read_input(input).instance();
            ApproxOptions o;
            o.search = search;
            o.threads = threads;
            o.s_cap = sep_width;
            const FptasResult r = fptas_hol(inst, parse_rational(eps), parse_radius(radius, delta_stab), o);
            std::cout << "value: " << r.value << "\n"
                      << "decimal: " << std::setprecision(17) << r.value.re().get_d() << "\n"
                      << "certified: " << yes_no(r.certified) << "\n"
                      << "p_min: " << r.p_min.get_d() << "\n"
                      << "delta_stab: " << r.delta_stab.get_d() << "\n"
                      << "max_gap: " << r.max_gap.get_d() << "\n"
                      << "max_radius: " << r.max_radius << "\n";
        } else if (decompose->parsed()) {
            const Graph g = graph_desc.empty() ? read_input(input).graph : make_graph(graph_desc);
            auto r = find_min_width(g, sep_width);
            std::cout << "separator " << r.s_used << "\n" << r.decomposition.to_text();
        } else if (gate->parsed()) {
            const int q = std::stoi(q_str);
            SsmGateReport rep;
            if (gate_model == "potts") {
                if (!beta.empty())
                    rep = gate_potts_beta(delta, q, parse_rational(beta), precision);
                else if (!lambda.empty())
                    rep = gate_potts_lambda(delta, q, parse_rational(lambda));
                else
                    throw InvalidArgument("gate potts needs --beta or --lambda");
            } else if (gate_model == "colorings") {
                rep = gate_colorings(delta, q);
            } else if (gate_model == "subgraphs_world") {
                if (lambda.empty() || mu.empty())
                    throw InvalidArgument("gate subgraphs_world needs --lambda and --mu");
                rep = gate_subgraphs_world(delta, parse_rational(lambda), parse_rational(mu));
            } else {
                if (beta.empty())
                    throw InvalidArgument("gate ising needs --beta");
                rep = gate_ising(delta, parse_rational(beta), field.empty() ? Rational(0) : parse_rational(field),
                                 precision);
            }
            std::cout << to_text(rep);
        } else if (oracle->parsed()) {
            const HolantInstance inst = read_input(input).instance();
            if (distribution) {
                for (const auto& x : gibbs_distribution(inst)) {
                    for (std::size_t e = 0; e < x.config.size(); ++e)
                        std::cout << (e ? " " : "") << x.config[e];
                    std::cout << " : " << x.probability << "\n";
                }
            } else if (edge >= 0) {
                const auto p = gibbs_marginal(inst, edge, parse_cond(cond));
                for (std::size_t i = 0; i < p.size(); ++i)
                    std::cout << i << " : " << p[i] << "\n";
            } else {
                std::cout << brute_force_hol(inst) << "\n";
            }
        }
    } catch (const ResourceExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FailedPrecondition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleInstance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleBoundary& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
