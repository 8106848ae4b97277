#pragma once

#include "spchain/structure.hpp"

#include <map>
#include <vector>

namespace spchain {

// Backward-pass output: the coefficients of the affine price functions
// p_i = a_t - b_i X_i - sum_{l in C_P(i)} b_l X_l, the SM convex coefficients,
// and the source inflow. The SM aggregates are kept for inspection and oracle
// cross-checks.
struct PriceSchedule {
    struct SmAggregates {
        int seller;
        std::vector<int> merge_nodes;               // h_1..h_n, topological order
        std::vector<Rat> c;                         // c_k per merge node
        std::map<int, Rat> beta_merge;              // beta_p per merge node
        std::map<int, Rat> beta_buyer;              // beta_j per buyer
        std::vector<std::vector<int>> buyer_groups;   // B_k
        std::vector<std::vector<int>> parent_groups;  // P_k
    };

    std::vector<Rat> b;                    // per node
    std::vector<Rat> alpha;                // per arc; meaningful on SM arcs
    std::vector<char> has_alpha;           // per arc
    std::vector<SmAggregates> aggregates;  // one entry per general-SM seller
    Rat source_inflow;                     // X_s

    const SmAggregates* aggregates_for(int seller) const;
};

enum class TieBreak { ById, ByIdReversed };

PriceSchedule backward_price(const Network& net, const MergeSets& ms,
                             const std::vector<ArcCase>& cases,
                             TieBreak tie_break = TieBreak::ById);

// The Appendix A.2 machinery for an SM seller whose self-merging children form
// a chain h_1..h_n. Groups B_k / P_k must match the chain order.
struct GeneralSmInput {
    int seller;
    std::vector<int> merge_nodes;                 // h_1..h_n
    std::vector<std::vector<int>> buyer_groups;   // B_k per merge node
    std::vector<std::vector<int>> parent_groups;  // P_k per merge node
    std::map<int, Rat> slope;                     // b for every buyer and merge node
    bool last_is_parent_merging = false;          // h_n in C_P(i)
    std::vector<int> cp_members;                  // C_P(i), for the b_i closing sum
};

struct GeneralSmResult {
    Rat b_seller;
    std::map<int, Rat> alpha;  // per buyer
    PriceSchedule::SmAggregates aggregates;
};

GeneralSmResult general_sm_coefficients(const GeneralSmInput& in);

// p_i evaluated at the given throughputs. X must contain i and all of C_P(i).
Rat price_at(const Network& net, const MergeSets& ms, const PriceSchedule& ps, int node,
             const std::map<int, Rat>& X);

}  // namespace spchain
