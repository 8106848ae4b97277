#pragma once

#include "spchain/flow.hpp"

#include <string>
#include <vector>

namespace spchain {

// Per-firm utilities via the closed form (b_i + sum_{l in C_P(i)} b_l) X_i^2 / 2,
// cross-checked against revenue minus cost; a mismatch throws internal_error.
std::vector<Rat> node_utilities(const Network& net, const MergeSets& ms,
                                const PriceSchedule& ps, const Equilibrium& eq);

// The common price the source offers every buyer: (a_t + a_s) / 2.
Rat source_price(const Network& net);

// Double-utility assertions: every dominating pair (i, j) has Pi_i >= 2 Pi_j,
// and every SS/SM seller earns at least twice its buyers' total.
struct DoubleUtilityEntry {
    std::string parent, child;
    Rat parent_utility, child_utility;
    bool holds;
};
std::vector<DoubleUtilityEntry> check_double_utility(const Network& net,
                                                     const std::vector<ArcCase>& cases,
                                                     const std::vector<Rat>& utilities);

struct WelfareReport {
    Rat consumer_surplus;   // b_t X_t^2 / 2
    Rat sw_by_sum;          // sum of utilities plus consumer surplus
    Rat sw_by_flow;         // (a_t - a_s - b_t X_s / 2) X_s
    Rat sw_by_lambda;       // (a_t - a_s)^2 (1 - 1/(2 lambda)) / (lambda b_t)
};
// All three routes must agree exactly; disagreement throws internal_error.
WelfareReport social_welfare(const Network& net, const PriceSchedule& ps,
                             const std::vector<Rat>& utilities, const Equilibrium& eq);

// lambda for the whole network and for every decomposition subtree (computed
// with the sink slope normalized to 1), with the composition laws checked at
// every internal node.
struct ComponentFactorReport {
    Rat lambda;  // whole network
    struct SubtreeEntry {
        int tree_index;          // pre-order position
        char kind;               // 'A', 'S', 'P'
        std::string source, sink;
        Rat lambda;
        bool law_checked;        // parallel law can be skipped (see note)
        std::string note;
    };
    std::vector<SubtreeEntry> subtrees;
};
ComponentFactorReport component_factor(const Network& net, const SPDecomposition& spd,
                                       const PriceSchedule& ps);

// The network with the two children of the given Series composition swapped
// (tree node addressed by pre-order position). Interior node labels are kept;
// the junction keeps its label between the reordered components.
Network swap_series(const Network& net, const SPDecomposition& spd, int series_preorder_index);

// Comparative-statics sweep over a_t (or a_s): per grid point the flow, the
// welfare, and every firm's utility. Monotonicity per the theory is asserted
// and reported.
struct SweepRow {
    Rat value;
    Rat X_s;
    Rat SW;
    std::vector<std::pair<std::string, Rat>> utilities;
};
struct SweepTable {
    std::string parameter;  // "a_t" or "a_s"
    std::vector<SweepRow> rows;
    bool monotone;
};
SweepTable demand_sweep(const Network& net, const std::string& parameter,
                        const std::vector<Rat>& values);

}  // namespace spchain
