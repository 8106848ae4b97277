#include "spchain/suite.hpp"

#include "spchain/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace spchain {

namespace {

void check_one(const GeneratedSPG& g, bool do_swap, SuiteResult& result) {
    const Network& net = g.net;
    auto fail = [&](const std::string& what) {
        std::ostringstream os;
        os << "network " << serialize_network(net) << ": " << what;
        result.failures.push_back(os.str());
    };

    // decomposition reproduces the arc set
    auto spd = decompose(net);
    {
        auto leaves = spd.leaf_arcs();
        std::set<std::pair<int, int>> tree_arcs(leaves.begin(), leaves.end());
        std::set<std::pair<int, int>> net_arcs(net.arcs.begin(), net.arcs.end());
        if (tree_arcs != net_arcs || leaves.size() != net.arcs.size())
            return fail("decomposition does not reproduce the arc set");
    }

    // shortcut-free by construction
    auto [reduced, removal] = remove_dominated_paths(net);
    if (!removal.empty()) return fail("generator emitted a shortcut");

    // merge sets from the tree match the definitions
    auto ms = merge_sets(net, spd);
    auto msd = merge_sets_by_definition(net);
    if (ms.c_self != msd.c_self || ms.c_parent != msd.c_parent || ms.c_trade != msd.c_trade)
        return fail("tree merge sets disagree with the definition-based sets");

    auto cases = classify_arcs(net, ms);
    auto ps = backward_price(net, ms, cases);
    auto ps_rev = backward_price(net, ms, cases, TieBreak::ByIdReversed);
    if (ps.b != ps_rev.b || ps.alpha != ps_rev.alpha)
        return fail("backward pass depends on the tie-break order");

    for (int v = 0; v < net.node_count(); ++v)
        if (ps.b[v] <= 0) return fail("non-positive slope");
    if (ps.b[net.source()] < 2 * net.sink_slope()) return fail("b_s < 2 b_t");

    // lambda and its scale invariance
    const Rat lambda = ps.b[net.source()] / net.sink_slope();
    if (lambda < 2) return fail("lambda < 2");
    if ((net.node_count() > 3 || net.arc_count() > 1) && lambda == 2)
        return fail("lambda == 2 on a non-single-arc network");
    {
        Network scaled = net;
        scaled.sink_slopes[0] *= 7;
        auto ps2 = backward_price(scaled, ms, cases);
        if (ps2.b[net.source()] != 7 * ps.b[net.source()]) return fail("b_s not homogeneous in b_t");
        if (ps2.alpha != ps.alpha) return fail("alpha changed under slope scaling");
    }

    auto eq = forward_flow(net, ms, cases, ps);
    auto rep = verify_equilibrium(net, eq);
    if (!rep.ok()) return fail("verifier: " + rep.to_string());

    // LCP oracle at every SM seller
    for (int i = 0; i < net.node_count(); ++i) {
        if (net.is_sink(i) || net.out_degree(i) < 2) continue;
        auto prob = sm_problem_at(net, ms, ps, eq, i);
        auto lcp = lcp_solve(prob);
        if (lcp.candidates_accepted != 1) return fail("LCP accepted != 1 active set");
        for (int k = 0; k < static_cast<int>(net.out_arcs[i].size()); ++k)
            if (lcp.x[k] != eq.flow[net.out_arcs[i][k]])
                return fail("LCP split disagrees with the forward pass at '" + net.ids[i] + "'");
        Rat alpha_sum = 0;
        for (int a : net.out_arcs[i]) alpha_sum += ps.alpha[a];
        if (alpha_sum != 1) return fail("alpha does not sum to 1 at '" + net.ids[i] + "'");
    }

    auto util = node_utilities(net, ms, ps, eq);
    auto welfare = social_welfare(net, ps, util, eq);  // throws on mismatch
    for (const auto& entry : check_double_utility(net, cases, util))
        if (!entry.holds)
            return fail("double-utility rule broken for (" + entry.parent + ", " + entry.child +
                        ")");

    component_factor(net, spd, ps);  // throws when a composition law breaks

    if (do_swap) {
        int series_index = -1;
        auto order = spd.preorder();
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (spd.at(order[k]).kind == SPDecomposition::Kind::Series) {
                series_index = static_cast<int>(k);
                break;
            }
        }
        if (series_index >= 0) {
            Network swapped = swap_series(net, spd, series_index);
            auto sol2 = solve(swapped);
            auto util2 = node_utilities(sol2.reduced, sol2.ms, sol2.prices, sol2.eq);
            auto welfare2 = social_welfare(sol2.reduced, sol2.prices, util2, sol2.eq);
            const Rat lambda2 =
                sol2.prices.b[sol2.reduced.source()] / sol2.reduced.sink_slope();
            if (lambda2 != lambda) return fail("swap changed lambda");
            if (sol2.prices.source_inflow != ps.source_inflow) return fail("swap changed X_s");
            if (welfare2.sw_by_sum != welfare.sw_by_sum) return fail("swap changed SW");
            if (util2[sol2.reduced.source()] != util[net.source()])
                return fail("swap changed the source utility");
            ++result.swaps_checked;
        }
    }
}

}  // namespace

SuiteResult run_property_suite(std::uint64_t seed0, int count, int max_nodes, int swap_count) {
    SuiteResult result;
    for (int k = 0; k < count; ++k) {
        RandomSPGSpec spec;
        spec.seed = seed0 + static_cast<std::uint64_t>(k);
        spec.max_nodes = max_nodes;
        GeneratedSPG g = generate_spg(spec);
        try {
            check_one(g, result.swaps_checked < swap_count, result);
        } catch (const std::exception& e) {
            result.failures.push_back("seed " + std::to_string(spec.seed) + ": exception: " +
                                      e.what());
        }
        ++result.checked;
        if (result.failures.size() > 8) break;  // enough evidence
    }
    return result;
}

}  // namespace spchain
