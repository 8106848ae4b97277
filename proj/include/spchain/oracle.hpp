#pragma once

#include "spchain/flow.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spchain {

// One SM seller's allocation problem: distribute inflow `total` over the
// buyers, respecting the merge structure. trade_merge[j] holds positions into
// merge_slopes for C_T(i, j).
struct SMAllocationProblem {
    std::vector<Rat> buyer_slopes;               // b_j
    std::vector<std::vector<int>> trade_merge;   // per buyer
    std::vector<Rat> merge_slopes;               // b_l
    Rat total;                                   // C
    Rat demand;                                  // a_t
    Rat const_term;                              // const_i, reporting only
};

struct LcpSolution {
    std::vector<Rat> x;          // per buyer, zero when inactive
    std::vector<char> active;
    Rat level;                   // the common value D of the active equations
    int candidates_accepted;     // must be exactly 1 (uniqueness)
};

// Active-set enumeration: solves the stationarity system on every nonempty
// buyer subset and keeps the unique candidate passing the complementarity
// conditions. Exact arithmetic throughout.
LcpSolution lcp_solve(const SMAllocationProblem& prob);

// Builds the allocation problem an SM seller faces in a computed equilibrium
// context (C = X_i there).
SMAllocationProblem sm_problem_at(const Network& net, const MergeSets& ms,
                                  const PriceSchedule& ps, const Equilibrium& eq, int seller);

// Subgame-perfect deviation scan for one firm: reallocate its outflow over a
// grid (and for the source, rescale the total), recompute the downstream
// response through the price functions, and report the best utility gain
// found. A certified equilibrium never yields a positive gain.
struct BrOptions {
    int grid = 64;               // pitch denominator: steps of X_s / grid
    int total_span = 2;          // source totals scanned up to span * X_s
};

struct BrReport {
    Rat base_utility;
    Rat max_gain;                // <= 0 when no improving deviation exists
    std::string best_deviation;
};

BrReport best_response_check(const Network& net, const MergeSets& ms,
                             const std::vector<ArcCase>& cases, const PriceSchedule& ps,
                             const Equilibrium& eq, int firm, const BrOptions& opts = {});

// Utility of the source posting offer (price, quantity) to its single buyer;
// the buyer accepts up to the point where its willingness meets the price.
// This is the desk model behind the worked line-network candidate.
Rat posted_offer_utility(const Network& net, const MergeSets& ms, const PriceSchedule& ps,
                         const Rat& price, const Rat& quantity);

// Seeded random shortcut-free SPG generation by composition trees. Any side of
// a parallel composition that is a bare arc is subdivided first, which keeps
// the result simple and shortcut-free.
struct RandomSPGSpec {
    std::uint64_t seed = 1;
    int max_nodes = 12;          // >= 3
    double series_bias = 0.5;    // probability of a series split
};

struct GeneratedSPG {
    Network net;
    SPDecomposition spd;
};

GeneratedSPG generate_spg(const RandomSPGSpec& spec);

}  // namespace spchain
