#pragma once

#include "spchain/network.hpp"

#include <string>
#include <vector>

namespace spchain {

// Binary series/parallel composition tree over arc leaves. Tree nodes live in
// an arena; child links are arena indices. Terminals are network node indices.
struct SPDecomposition {
    enum class Kind { Arc, Series, Parallel };

    struct Node {
        Kind kind;
        int left = -1;
        int right = -1;
        int source;
        int sink;
    };

    std::vector<Node> nodes;
    int root = -1;

    const Node& at(int i) const { return nodes[i]; }

    // Leaf arcs of the subtree rooted at `index` (whole tree by default).
    std::vector<std::pair<int, int>> leaf_arcs(int index = -1) const;

    // Network node indices appearing in the subtree rooted at `index`.
    std::vector<int> subtree_nodes(int index) const;

    // Pre-order listing "0 Series s..t", used by the CLI to name tree nodes.
    std::vector<int> preorder() const;
    std::string describe(const Network& net) const;
};

// True when the single-source single-sink DAG reduces to one edge by
// series/parallel reduction. Tolerates shortcuts (they reduce as parallels).
bool is_series_parallel(const Network& net);

// Series/parallel reduction with tree recording. Throws not_series_parallel
// when the reduction jams (e.g. the Wheatstone bridge).
SPDecomposition decompose(const Network& net);

}  // namespace spchain
