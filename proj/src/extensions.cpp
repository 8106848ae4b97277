#include "spchain/extensions.hpp"

#include "linear.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spchain {

StrategyOutcome two_market_analyze(const TwoMarketScenario& sc) {
    if (sc.b1 <= 0 || sc.b2 <= 0) throw validation_error("market slopes must be positive");
    if (!(sc.a1 >= sc.a2 && sc.a2 > sc.a_s && sc.a_s > 0))
        throw validation_error("two-market scenario needs a1 >= a2 > a_s > 0");

    StrategyOutcome out;

    // High price strategy: the chain s -> v -> market 1.
    out.high.X = (sc.a1 - sc.a_s) / (4 * sc.b1);
    out.high.pi_v = sc.b1 * out.high.X * out.high.X;
    out.high.pi_s = 2 * out.high.pi_v;
    out.high.cs = out.high.pi_v / 2;
    out.high.sw = 7 * out.high.pi_v / 2;
    // v must not want to serve market 2: price at v stays at or above a2
    out.high.feasible = (sc.a1 + sc.a_s) / 2 >= sc.a2;

    // Low price strategy: both markets active.
    const Rat B = Rat(1) / (Rat(1) / sc.b1 + Rat(1) / sc.b2);
    const Rat A = (sc.a1 / sc.b1 + sc.a2 / sc.b2) * B;
    out.low.X = (A - sc.a_s) / (4 * B);
    out.x1 = (sc.a1 - sc.a2 + 2 * sc.b2 * out.low.X) / (2 * (sc.b1 + sc.b2));
    out.x2 = (2 * sc.b1 * out.low.X - sc.a1 + sc.a2) / (2 * (sc.b1 + sc.b2));
    out.low.pi_s = 2 * B * out.low.X * out.low.X;
    out.low.pi_v = sc.b1 * out.x1 * out.x1 + sc.b2 * out.x2 * out.x2;
    out.low.cs = out.low.pi_v / 2;
    out.low.sw = 3 * (sc.a1 - sc.a2) * (sc.a1 - sc.a2) / (8 * (sc.b1 + sc.b2)) +
                 7 * B * out.low.X * out.low.X / 2;
    out.low.feasible = out.x2 >= 0;

    if (out.low.feasible && out.high.feasible) {
        if (out.high.pi_s > out.low.pi_s)
            out.preferred = "high";
        else if (out.low.pi_s > out.high.pi_s)
            out.preferred = "low";
        else
            out.preferred = "either";
    } else if (!out.low.feasible) {
        out.preferred = "high";
    } else {
        out.preferred = "low";
    }
    out.multiple_equilibria =
        out.low.feasible && out.high.feasible && out.high.pi_s == out.low.pi_s;
    out.a1_star = indifference_demand(rat_to_double(sc.a_s), rat_to_double(sc.a2),
                                      rat_to_double(sc.b1), rat_to_double(sc.b2));
    return out;
}

double indifference_demand(double a_s, double a2, double b1, double b2) {
    const double delta = (a2 - a_s) / (4 * b2);
    return a_s + 4 * std::pow(b1, 1.5) * delta / (std::sqrt(b1 + b2) - std::sqrt(b1));
}

Rat two_market_sw_gap(const TwoMarketScenario& sc) {
    const Rat d12 = sc.a1 - sc.a2;
    const Rat d2s = sc.a2 - sc.a_s;
    return (5 * sc.b2 * d12 * d12 + 7 * (sc.b1 + sc.b2) * d2s * d2s) /
           (32 * sc.b2 * (sc.b1 + sc.b2));
}

SmspgSolution smspg_equal_demand_solve(const Network& net) {
    if (net.kind == NetworkKind::MultiSource)
        throw validation_error("multiple sources are not supported here");
    if (!has_uniform_demand(net))
        throw infeasible_error(
            "markets have different demands; only the uniform case has a general solver "
            "(see two_market_analyze for the two-market shape)");
    // shortcut sanity: an arc next to a longer path would break the passes
    for (int a = 0; a < net.arc_count(); ++a) {
        auto [i, j] = net.arcs[a];
        if (net.out_degree(i) < 2 || net.in_degree(j) < 2) continue;
        for (int oa : net.out_arcs[i]) {
            if (oa == a) continue;
            if (reaches(net, net.arcs[oa].second, j))
                throw validation_error("shortcut arc (" + net.ids[i] + ", " + net.ids[j] +
                                       "); remove dominated paths first");
        }
    }

    SmspgSolution sol;
    sol.ms = merge_sets_by_definition(net);
    sol.cases = classify_arcs(net, sol.ms);

    const int n = net.node_count();
    const int s = net.source();
    const Rat a = uniform_demand(net);
    sol.prices.b.assign(n, Rat(0));
    sol.prices.alpha.assign(net.arc_count(), Rat(0));
    sol.prices.has_alpha.assign(net.arc_count(), 0);
    for (std::size_t k = 0; k < net.sinks.size(); ++k)
        sol.prices.b[net.sinks[k]] = net.sink_slopes[k];

    auto order = topological_order(net);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int i = *it;
        if (net.is_sink(i)) continue;
        const auto& buyers = net.out_arcs[i];
        Rat cp_i = 0;
        for (int l : sol.ms.c_parent[i]) cp_i += sol.prices.b[l];
        if (buyers.size() == 1) {
            const int j = net.arcs[buyers[0]].second;
            Rat cp_j = 0;
            for (int l : sol.ms.c_parent[j]) cp_j += sol.prices.b[l];
            sol.prices.b[i] =
                (net.in_degree(j) >= 2 ? sol.prices.b[j] : 2 * sol.prices.b[j]) + cp_j;
        } else {
            // Merge structures here can be forests (chains toward different
            // markets), so the allocation system is solved directly instead of
            // through the chain recursion.
            const int m = static_cast<int>(buyers.size());
            std::vector<std::vector<Rat>> A(m + 1, std::vector<Rat>(m + 1, Rat(0)));
            std::vector<Rat> rhs(m + 1, Rat(0));
            for (int r = 0; r < m; ++r) {
                const int j = net.arcs[buyers[r]].second;
                A[r][r] += 2 * sol.prices.b[j];
                for (int l : sol.ms.c_trade[buyers[r]]) {
                    for (int c = 0; c < m; ++c) {
                        const auto& ct = sol.ms.c_trade[buyers[c]];
                        if (std::binary_search(ct.begin(), ct.end(), l))
                            A[r][c] += 2 * sol.prices.b[l];
                    }
                }
                A[r][m] = -1;
            }
            for (int c = 0; c < m; ++c) A[m][c] = 1;
            rhs[m] = 1;
            auto x = solve_linear(A, rhs);
            for (int r = 0; r < m; ++r) {
                if (x[r] <= 0) throw internal_error("non-positive market split");
                sol.prices.alpha[buyers[r]] = x[r];
                sol.prices.has_alpha[buyers[r]] = 1;
            }
            sol.prices.b[i] = x[m] + cp_i;  // x[m] = D at C=1, and 2 c_eff = D
        }
        if (sol.prices.b[i] <= 0) throw internal_error("non-positive slope coefficient");
    }
    sol.prices.source_inflow = (a - net.source_cost()) / sol.prices.b[s];

    sol.eq = forward_flow(net, sol.ms, sol.cases, sol.prices);

    // certification: exact stationarity checks, the LCP oracle at each SM
    // seller, and a deviation scan for the source
    auto rep = verify_equilibrium(net, sol.eq);
    if (!rep.ok())
        throw internal_error("SMSPG equilibrium failed verification: " + rep.to_string());
    for (int i = 0; i < n; ++i) {
        if (net.is_sink(i) || net.out_degree(i) < 2) continue;
        auto prob = sm_problem_at(net, sol.ms, sol.prices, sol.eq, i);
        auto lcp = lcp_solve(prob);
        for (int k = 0; k < static_cast<int>(net.out_arcs[i].size()); ++k)
            if (lcp.x[k] != sol.eq.flow[net.out_arcs[i][k]])
                throw internal_error("LCP oracle disagrees with the market split at '" +
                                     net.ids[i] + "'");
    }
    auto br = best_response_check(net, sol.ms, sol.cases, sol.prices, sol.eq, s);
    if (br.max_gain > 0)
        throw internal_error("source has an improving deviation: " + br.best_deviation);
    return sol;
}

Network msspg_demo_network() {
    return make_network({"s1", "s2", "c", "t"},
                        {{"s1", "c"}, {"s2", "c"}, {"c", "t"}},
                        {{"s1", Rat(1)}, {"s2", Rat(1)}},
                        {{"t", Rat(2), Rat(1)}});
}

namespace {

// Utility of each source at a posted price pair, with the intermediary buying
// from the cheaper source (splitting evenly on a tie) up to its optimum.
std::pair<Rat, Rat> msspg_utilities(const Rat& p1, const Rat& p2) {
    const Rat cost = 1, demand = 2;
    const Rat pm = std::min(p1, p2);
    Rat total = (demand - pm) / 2;
    if (total < 0) total = 0;
    Rat u1 = 0, u2 = 0;
    if (p1 < p2)
        u1 = (p1 - cost) * total;
    else if (p2 < p1)
        u2 = (p2 - cost) * total;
    else {
        u1 = (p1 - cost) * total / 2;
        u2 = u1;
    }
    return {u1, u2};
}

}  // namespace

MsspgTrace msspg_nonexistence_demo(Rat p1, Rat p2, int max_rounds, Rat eps) {
    if (eps <= 0) throw validation_error("undercut step must be positive");
    const Rat cost = 1;
    MsspgTrace trace;
    trace.strictly_decreasing = true;
    trace.reached_boundary = false;

    for (int r = 0; r < max_rounds; ++r) {
        auto [u1, u2] = msspg_utilities(p1, p2);
        // the source with the smaller utility moves; ties go to source 2,
        // which matches the worked demo (source 1 posts first)
        const int mover = (u1 < u2) ? 1 : 2;
        const Rat pm = std::min(p1, p2);
        const Rat target = pm - eps;
        if (target <= cost) {
            trace.reached_boundary = true;
            trace.note =
                "prices at the production cost: undercutting would sell below cost, and raising "
                "the price loses the whole trade share; no profile is stable above cost";
            break;
        }
        const Rat before = mover == 1 ? u1 : u2;
        const Rat prev_min = pm;
        if (mover == 1)
            p1 = target;
        else
            p2 = target;
        auto [n1, n2] = msspg_utilities(p1, p2);
        const Rat after = mover == 1 ? n1 : n2;
        if (!(after > before))
            throw internal_error("undercut failed to improve the mover's utility");
        if (std::min(p1, p2) >= prev_min) trace.strictly_decreasing = false;
        trace.rounds.push_back({mover, p1, p2, before, after});
    }
    if (!trace.reached_boundary && trace.rounds.empty())
        trace.note = "no rounds simulated";
    return trace;
}

Network dag_demo_network() {
    return make_network(
        {"s", "a", "b", "c", "d", "t"},
        {{"s", "a"}, {"s", "b"}, {"a", "c"}, {"b", "c"}, {"b", "d"}, {"c", "t"}, {"d", "t"}},
        {{"s", Rat(1)}}, {{"t", Rat(11), Rat(1)}});
}

DagReport dag_example_check() {
    DagReport rep;
    const Rat a_t = 11, a_s = 1;

    auto case_net = [&](std::vector<std::string> nodes,
                        std::vector<std::pair<std::string, std::string>> arcs) {
        return make_network(std::move(nodes), std::move(arcs), {{"s", a_s}},
                            {{"t", a_t, Rat(1)}});
    };
    auto pi_s_of = [](const Solution& sol) {
        const int s = sol.reduced.source();
        Rat coef = sol.prices.b[s];
        return coef * sol.eq.X[s] * sol.eq.X[s] / 2;
    };

    // only the a-chain trades
    auto line = case_net({"s", "a", "c", "t"}, {{"s", "a"}, {"a", "c"}, {"c", "t"}});
    auto sol_line = solve(line);
    rep.cases.push_back({"x>0, y+z=0", pi_s_of(sol_line)});

    // only the b-side trades
    auto stem = case_net({"s", "b", "c", "d", "t"},
                         {{"s", "b"}, {"b", "c"}, {"b", "d"}, {"c", "t"}, {"d", "t"}});
    auto sol_stem = solve(stem);
    rep.cases.push_back({"x=0, y+z>0", pi_s_of(sol_stem)});

    // both chains trade, the cross arc b->c stays inactive
    auto chains = case_net({"s", "a", "b", "c", "d", "t"},
                           {{"s", "a"}, {"s", "b"}, {"a", "c"}, {"b", "d"}, {"c", "t"}, {"d", "t"}});
    auto sol_chains = solve(chains);
    rep.cases.push_back({"x,z>0, y=0", pi_s_of(sol_chains)});

    rep.best_case_utility = std::max({rep.cases[0].source_utility, rep.cases[1].source_utility,
                                      rep.cases[2].source_utility});

    const auto& cn = sol_chains.reduced;
    rep.x = sol_chains.eq.flow[cn.arc_between(cn.index_of("s"), cn.index_of("a"))];
    rep.z = sol_chains.eq.flow[cn.arc_between(cn.index_of("s"), cn.index_of("b"))];
    rep.p_sa = *sol_chains.eq.p[cn.index_of("a")];
    rep.p_sb = *sol_chains.eq.p[cn.index_of("b")];
    rep.p_ac = *sol_chains.eq.p[cn.index_of("c")];
    rep.p_bd = *sol_chains.eq.p[cn.index_of("d")];

    // Deviation scan at the candidate. The source's options are captured by
    // the case utilities plus a quantity grid along the equilibrium pattern;
    // the other firms reallocate at the posted prices. b's sales to c are
    // capped at p_ac: c can always fall back to a's goods at that price.
    bool ok = rep.cases[2].source_utility >= rep.cases[0].source_utility &&
              rep.cases[2].source_utility >= rep.cases[1].source_utility;
    const Rat base_s = rep.cases[2].source_utility;
    const Rat b_s = sol_chains.prices.b[cn.source()];
    for (int step = 0; step <= 256; ++step) {
        const Rat X = Rat(step) / 64;  // up to twice the equilibrium total
        const Rat u = (a_t - b_s / 2 * X - a_s) * X;
        if (u > base_s) ok = false;
    }
    // firm b: divert delta of its unit inflow from d to c at a price <= p_ac,
    // keeping the rest at p_bd
    const Rat base_b = (rep.p_bd - rep.p_sb) * 1;
    for (int step = 0; step <= 64; ++step) {
        const Rat delta = Rat(step) / 64;
        const Rat u = rep.p_ac * delta + rep.p_bd * (1 - delta) - rep.p_sb * 1;
        if (u > base_b) ok = false;
    }
    // firm a: buy w <= 1 at p_sa, sell it to c at p_ac
    const Rat base_a = (rep.p_ac - rep.p_sa) * 1;
    for (int step = 0; step <= 64; ++step) {
        const Rat w = Rat(step) / 64;
        if ((rep.p_ac - rep.p_sa) * w > base_a) ok = false;
    }
    // firms c and d: accept w of the offered unit, sell at the market price
    for (const char* firm : {"c", "d"}) {
        const Rat paid = firm[0] == 'c' ? rep.p_ac : rep.p_bd;
        const Rat other = 1;  // the sibling chain's sink flow stays put
        const Rat base = (a_t - (1 + other)) * 1 - paid * 1;
        for (int step = 0; step <= 64; ++step) {
            const Rat w = Rat(step) / 64;
            const Rat u = (a_t - (w + other)) * w - paid * w;
            if (u > base) ok = false;
        }
    }
    rep.no_improving_deviation = ok;

    rep.active_subgraph_is_spg = is_series_parallel(chains);
    return rep;
}

}  // namespace spchain
