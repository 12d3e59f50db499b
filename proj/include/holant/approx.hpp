#pragma once

#include "holant/graph.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace holant {

struct RadiusPolicy {
    enum class Mode { fixed, adaptive };
    Mode mode = Mode::adaptive;
    int r_fixed = 1;
    /// Total-variation tolerance between consecutive radii. Zero means
    /// eps / (8 q m) inside fptas_hol; estimate_marginals requires it positive.
    Rational delta_stab{0};
    /// Largest radius tried; negative means the edge's eccentricity.
    int r_cap = -1;

    static RadiusPolicy fixed(int r);
    static RadiusPolicy adaptive(Rational delta = Rational(0), int r_cap = -1);
    /// Fixed radius that always reaches the whole component.
    static RadiusPolicy whole_graph();
};

struct ApproxOptions {
    /// tractable_search plugin: "auto" or one of search_plugins().
    std::string search = "auto";
    /// Worker threads for the q marginal queries of one step.
    int threads = 1;
    /// Separator size cap for the per-ball decompositions.
    int s_cap = 8;
};

/// Plugin names in the order "auto" tries them.
const std::vector<std::string>& search_plugins();

/// A full feasible configuration agreeing with `partial`, or none.
std::optional<std::vector<int>> tractable_search(const HolantInstance& instance, const PartialConfiguration& partial,
                                                 const std::string& plugin = "auto");

struct MarginalEstimate {
    std::vector<Rational> p;  // one entry per value, summing to 1
    int radius = 0;
    /// The last ball covered the whole component of e: no truncation.
    bool exact = false;
    /// Exact, or two consecutive radii within delta_stab.
    bool stabilized = false;
    /// Total-variation distance between the last two radii (0 if only one).
    Rational gap{0};
    std::vector<int> radii;
};

/// Conditional marginal of edge e under `cond` from r-balls. Numerators are
/// hol of the ball with e pinned to each value; they share one denominator.
MarginalEstimate estimate_marginals(const HolantInstance& instance, int e, const PartialConfiguration& cond,
                                    const RadiusPolicy& policy, const ApproxOptions& options = {});

Rational estimate_marginal(const HolantInstance& instance, int e, const PartialConfiguration& cond, int value,
                           const RadiusPolicy& policy, const ApproxOptions& options = {});

struct FptasResult {
    Value value;
    bool certified = false;
    Rational p_min{1};
    Rational delta_stab{0};
    Rational max_gap{0};
    int max_radius = 0;
    std::vector<int> tau;
    std::vector<Rational> p;  // p_k of each step
    std::vector<bool> stabilized;
};

/// Self-reduction over edges in index order with argmax pins (smallest value
/// on ties). Requires nonnegative rational function values.
FptasResult fptas_hol(const HolantInstance& instance, const Rational& eps, const RadiusPolicy& policy = {},
                      const ApproxOptions& options = {});

struct SsmGateReport {
    std::string model;
    std::vector<std::pair<std::string, std::string>> parameters;
    /// "exact", "lambda", "beta" or "interval".
    std::string form;
    /// The quantity the parameter is compared against.
    std::string threshold;
    double threshold_value = 0;
    std::optional<Rational> threshold_exact;
    bool satisfied = false;
    std::string note;
};

/// Delta < (1 + lambda mu^2)^2 / (1 - mu^2), exact.
SsmGateReport gate_subgraphs_world(int delta, const Rational& lambda, const Rational& mu);

/// Delta < (e^{2b+4B} + e^{2b} + 2e^{2B})^2 / (e^{2B}(e^{2b}+1)^2(e^{2B}+1)^2)
/// with the threshold bounded from below by directed rounding.
SsmGateReport gate_ising(int delta, const Rational& beta, const Rational& field, int precision_bits = 128);

/// q - 2 > (lambda - 1)(Delta - 1) lambda^Delta, exact.
SsmGateReport gate_potts_lambda(int delta, int q, const Rational& lambda);

/// beta < ln((q - 2)/(Delta - 1))/(Delta + 1) with the threshold bounded from below.
SsmGateReport gate_potts_beta(int delta, int q, const Rational& beta, int precision_bits = 128);

/// q > alpha Delta - gamma with alpha = 1.76322, gamma = 0.47031.
SsmGateReport gate_colorings(int delta, int q);

std::string to_text(const SsmGateReport& report);

} // namespace holant
