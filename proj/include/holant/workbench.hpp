#pragma once

#include "holant/graph.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace holant {

enum class ModelKind { matchings, perfect_matchings, weighted_matchings, colorings, potts, subgraphs_world, ising };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct ModelSpec {
    ModelKind kind = ModelKind::matchings;
    int q = 2;
    /// Potts edge weight, or the subgraphs-world edge weight.
    std::optional<Rational> lambda;
    std::optional<Rational> mu;
    /// Potts: lambda defaults to an approximant of e^beta. Ising: coupling.
    std::optional<Rational> beta;
    /// Ising external field B.
    std::optional<Rational> field;
    /// weighted_matchings: one weight per edge of G, default 1.
    std::vector<Rational> edge_weights;
    /// Accuracy of the rational approximants, in bits.
    int precision_bits = 128;
};

/// Matchings-type models live on G directly; the rest on its incidence graph
/// with original vertex v at index v and edge e at index n + e.
HolantInstance build_model(const ModelSpec& spec, const Graph& graph);

struct InstanceFile;
/// build_model with builtin literals kept, for writing instance files.
InstanceFile model_file(const ModelSpec& spec, const Graph& graph);

/// Continued-fraction convergent of x, the first within 2^-bits of it.
Rational rational_approximant(const Rational& x, int bits);
Rational exp_approximant(const Rational& x, int bits);
Rational tanh_approximant(const Rational& x, int bits);
Rational cosh_approximant(const Rational& x, int bits);

/// M_G = 2^|V| (cosh beta)^|E| (cosh B)^|V|, from cosh approximants.
Value ising_prefactor(const Graph& graph, const Rational& beta, const Rational& field, int bits = 128);

/// Exact conditional marginal of edge e by enumeration. FailedPrecondition
/// when the conditioning event has zero mass.
std::vector<Value> gibbs_marginal(const HolantInstance& instance, int e, const PartialConfiguration& cond = {});

struct GibbsEntry {
    std::vector<int> config;
    Value probability;
};

/// Every configuration of nonzero weight with its probability w / hol.
std::vector<GibbsEntry> gibbs_distribution(const HolantInstance& instance);

/// One `function` line: a builtin literal or an explicit table.
struct FunctionLiteral {
    std::optional<BuiltinKind> kind;
    BuiltinParams params;
};

struct InstanceFile {
    int version = 1;
    int q = 2;
    Graph graph;
    std::vector<FunctionLiteral> functions;
    std::string model;  // free text after `model`, empty if absent

    HolantInstance instance() const;
    static InstanceFile from_instance(const HolantInstance& instance, std::string model = {});
};

/// Line-numbered InvalidArgument on malformed input.
InstanceFile parse_instance_file(std::istream& in);
InstanceFile parse_instance_file(const std::string& text);
std::string serialize(const InstanceFile& file);

/// `path:n`, `cycle:n`, `grid:RxC`, `complete:n`, `prism`, `cube`,
/// `randplanar:n:seed[:maxdeg]`, or `edges:<file>` (one `u v` pair per line).
Graph make_graph(const std::string& description);
Graph prism_graph();
Graph cube_graph();
/// Points on an integer grid joined shortest-first while no two segments cross.
/// max_degree > 0 skips edges at saturated endpoints.
Graph random_planar_graph(int n, unsigned seed, int max_degree = 0);

} // namespace holant
