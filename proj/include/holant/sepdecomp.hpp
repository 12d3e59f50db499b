#pragma once

#include "holant/graph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace holant {

/// S is a vertex set of G (it may leave W); {X, Y} partitions W minus S and
/// every X-Y path meets S.
struct BalancedSeparator {
    std::vector<int> W;
    std::vector<int> S;
    std::vector<int> X;
    std::vector<int> Y;
};

using SeparatorFilter = std::function<bool(const BalancedSeparator&)>;

/// First balanced W-separator of size <= s_max in enumeration order: the
/// empty separator between components, then partitions {S_W, X_W, Y_W} of W
/// by |S_W| ascending and lexicographically, each completed by a minimum
/// X_W-Y_W vertex cut of G - S_W. Candidates rejected by `accept` are skipped.
std::optional<BalancedSeparator> balanced_separator(const Graph& graph, const std::vector<int>& W, int s_max,
                                                    const SeparatorFilter& accept = {});

struct DecompositionNode {
    std::vector<int> V;
    std::vector<int> S;
    int parent = -1;
    int left = -1;
    int right = -1;

    bool is_leaf() const { return left < 0; }
};

class SeparatorDecomposition {
public:
    SeparatorDecomposition() = default;
    SeparatorDecomposition(std::vector<DecompositionNode> nodes, int width)
        : nodes_(std::move(nodes)), width_(width)
    {
    }

    const std::vector<DecompositionNode>& nodes() const { return nodes_; }
    const DecompositionNode& node(int i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    int root() const { return 0; }
    int width() const { return width_; }

    /// `node <id> parent <pid> V {...} S {...}` lines and a `width <w>` footer.
    std::string to_text() const;

private:
    std::vector<DecompositionNode> nodes_;
    int width_ = 0;
};

/// max over nodes of max(|boundary(V_i)|, |S_i|).
int decomposition_width(const Graph& graph, const std::vector<DecompositionNode>& nodes);

std::optional<SeparatorDecomposition> build_decomposition(const Graph& graph, int s);

struct MinWidthResult {
    SeparatorDecomposition decomposition;
    int s_used = 0;
};

/// Tries s = 1..s_cap; throws ResourceExhausted past the cap.
MinWidthResult find_min_width(const Graph& graph, int s_cap);

struct ValidationReport {
    bool ok = true;
    int node = -1;
    std::string message;
};

ValidationReport validate(const Graph& graph, const SeparatorDecomposition& decomposition);

} // namespace holant
