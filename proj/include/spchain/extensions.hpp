#pragma once

#include "spchain/oracle.hpp"

#include <string>
#include <vector>

namespace spchain {

// ---- Two-market network (source -> intermediary -> markets 1 and 2) ----

struct TwoMarketScenario {
    Rat a_s;        // production cost
    Rat a1, b1;     // strong market
    Rat a2, b2;     // weak market; a1 >= a2 > a_s required
};

struct StrategyValues {
    Rat X;          // intermediary throughput
    Rat pi_s;       // source utility
    Rat pi_v;       // intermediary utility
    Rat cs;         // consumer surplus
    Rat sw;         // social welfare
    bool feasible;
};

struct StrategyOutcome {
    StrategyValues high;     // only market 1 active
    StrategyValues low;      // both markets active
    Rat x1, x2;              // market flows under the low strategy
    std::string preferred;   // "high" | "low" | "either"
    bool multiple_equilibria;
    double a1_star;          // indifference demand for market 1
};

StrategyOutcome two_market_analyze(const TwoMarketScenario& sc);

// Demand at which the source is indifferent between the strategies:
// a_s + 4 b1^{3/2} Delta / (sqrt(b1+b2) - sqrt(b1)), Delta = (a2-a_s)/(4 b2).
double indifference_demand(double a_s, double a2, double b1, double b2);

// The closed-form welfare gap SW_low - SW_high; nonnegative on every valid
// scenario.
Rat two_market_sw_gap(const TwoMarketScenario& sc);

// ---- Uniform-demand SMSPG ----

struct SmspgSolution {
    MergeSets ms;
    std::vector<ArcCase> cases;
    PriceSchedule prices;
    Equilibrium eq;
};

// Backward/forward passes generalized to several markets sharing one demand
// curve. Every market ends up active; the result is certified per-instance by
// the verifier, the LCP oracle at each SM node, and a deviation scan for the
// source. Non-uniform demands are rejected (see two_market_analyze for the
// tractable two-market shape).
SmspgSolution smspg_equal_demand_solve(const Network& net);

// ---- MSSPG non-existence demo (two sources, one intermediary, one market) ----

struct MsspgTrace {
    struct Round {
        int mover;               // 1 or 2
        Rat p1, p2;              // prices after the move
        Rat utility_before;      // mover's utility at the visited profile
        Rat utility_after;       // strictly larger: the exhibited deviation
    };
    std::vector<Round> rounds;
    bool strictly_decreasing;
    bool reached_boundary;
    std::string note;
};

MsspgTrace msspg_nonexistence_demo(Rat p1, Rat p2, int max_rounds, Rat eps);

// The fixed demo network itself, for inspection via the CLI.
Network msspg_demo_network();

// ---- General-DAG worked example ----

struct DagReport {
    struct Case {
        std::string name;
        Rat source_utility;
    };
    std::vector<Case> cases;             // the three activity patterns
    Rat x, z;                            // candidate equilibrium flows
    Rat p_sa, p_sb, p_ac, p_bd;          // candidate prices
    Rat best_case_utility;
    bool no_improving_deviation;
    bool active_subgraph_is_spg;
};

DagReport dag_example_check();
Network dag_demo_network();

}  // namespace spchain
