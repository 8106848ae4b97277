#pragma once

#include "spchain/decompose.hpp"
#include "spchain/network.hpp"

#include <string>
#include <vector>

namespace spchain {

// Merging-child sets. C_S(i): children reachable by two node-disjoint paths
// from i. C_P(i): children at which flows from some ancestor of i re-merge.
// C_T(i,j) = C_S(i) ∩ C(j) \ C_P(i) per arc. c_self is kept in topological
// order (the order the aggregate recursion consumes); c_parent and c_trade are
// sorted by node index. Full descendant/ancestor sets are exposed as queries
// rather than materialized.
struct MergeSets {
    std::vector<std::vector<int>> c_self;    // per node
    std::vector<std::vector<int>> c_parent;  // per node
    std::vector<std::vector<int>> c_trade;   // per arc, sorted by node index
    // Per arc (i,j): the members of C_S(i) the arc's flow passes through,
    // nearest first (so c_trade[a] = trade_chain[a] minus C_P(i)).
    std::vector<std::vector<int>> trade_chain;
    std::vector<int> topo_pos;               // node -> position in topological order

    bool in_c_parent(int node, int l) const;
};

// Fast path: reads the merge structure off the decomposition tree.
MergeSets merge_sets(const Network& net, const SPDecomposition& spd);
MergeSets merge_sets(const Network& net);

// Oracle path: straight from the definitions (two node-disjoint paths found by
// a unit-capacity flow). Works on any DAG shape, including multi-sink ones.
MergeSets merge_sets_by_definition(const Network& net);

// Descendants/ancestors by reachability, sorted by node index, excluding v.
std::vector<int> descendants(const Network& net, int v);
std::vector<int> ancestors(const Network& net, int v);

// True when there are two node-disjoint directed paths from i to j.
bool two_disjoint_paths(const Network& net, int i, int j);

enum class ArcCase { SS, MS, SM };
const char* arc_case_name(ArcCase c);

// Labels every arc by the seller's out-degree and buyer's in-degree.
// Throws internal_error on an MM arc (impossible in shortcut-free SPGs).
std::vector<ArcCase> classify_arcs(const Network& net, const MergeSets& ms);

// dominating_parents(net)[j] = nodes lying on every source-to-j path, minus j.
std::vector<std::vector<int>> dominating_parents(const Network& net);

// Dominated-path removal (iterated to a fixed point).
struct RemovalReport {
    struct Shortcut {
        std::pair<std::string, std::string> arc;
        std::vector<std::pair<std::string, std::string>> removed_arcs;
    };
    std::vector<Shortcut> shortcuts;
    std::vector<std::string> removed_nodes;
    std::vector<std::pair<std::string, std::string>> removed_arcs;  // union, sorted

    bool empty() const { return shortcuts.empty(); }
};

std::pair<Network, RemovalReport> remove_dominated_paths(const Network& net);

}  // namespace spchain
