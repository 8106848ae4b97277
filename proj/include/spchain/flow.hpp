#pragma once

#include "spchain/pricing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spchain {

// Full equilibrium: per-arc flows and activity, per-node throughput and
// realized unit price. Nodes and arcs dropped by dominated-path removal carry
// zero flow, inactive status, and no price.
struct Equilibrium {
    std::vector<Rat> flow;                 // per arc
    std::vector<char> active;              // per arc
    std::vector<Rat> X;                    // per node
    std::vector<std::optional<Rat>> p;     // per node
};

Equilibrium forward_flow(const Network& net, const MergeSets& ms,
                         const std::vector<ArcCase>& cases, const PriceSchedule& ps);

// remove_dominated_paths -> decompose -> merge_sets -> classify_arcs ->
// backward_price -> forward_flow, bundled with every intermediate product.
struct Solution {
    Network reduced;            // shortcut-free working network
    RemovalReport removal;
    SPDecomposition spd;        // decomposition of `reduced`
    MergeSets ms;
    std::vector<ArcCase> cases;
    PriceSchedule prices;
    Equilibrium eq;             // over `reduced`
    Equilibrium full;           // over the input network, removed arcs echoed
};

Solution solve(const Network& net);

// Equilibrium verification by exact rational checks: conservation,
// per-arc stationarity of each firm's utility, price consistency, and price
// monotonicity along active arcs. Recomputes the merge structure and slope
// coefficients from the definitions so it can certify foreign candidates.
struct VerificationReport {
    struct Violation {
        std::string kind;    // "conservation" | "stationarity" | "price" | "monotonicity"
        std::string where;
        std::string detail;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

VerificationReport verify_equilibrium(const Network& net, const Equilibrium& eq);

}  // namespace spchain
