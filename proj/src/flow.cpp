#include "spchain/flow.hpp"

#include "linear.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace spchain {

Equilibrium forward_flow(const Network& net, const MergeSets& ms,
                         const std::vector<ArcCase>& cases, const PriceSchedule& ps) {
    (void)cases;
    Equilibrium eq;
    eq.flow.assign(net.arc_count(), Rat(0));
    eq.active.assign(net.arc_count(), 0);
    eq.X.assign(net.node_count(), Rat(0));
    eq.p.assign(net.node_count(), std::nullopt);

    eq.X[net.source()] = ps.source_inflow;
    for (int i : topological_order(net)) {
        if (net.is_sink(i)) continue;
        const auto& buyers = net.out_arcs[i];
        if (buyers.size() == 1) {
            eq.flow[buyers[0]] = eq.X[i];
        } else {
            for (int a : buyers) eq.flow[a] = ps.alpha[a] * eq.X[i];
        }
        for (int a : buyers) {
            eq.X[net.arcs[a].second] += eq.flow[a];
            eq.active[a] = eq.flow[a] > 0;
            if (!eq.active[a]) throw internal_error("inactive arc on a shortcut-free SPG");
        }
    }

    std::map<int, Rat> throughputs;
    for (int v = 0; v < net.node_count(); ++v) throughputs[v] = eq.X[v];
    for (int v = 0; v < net.node_count(); ++v)
        eq.p[v] = price_at(net, ms, ps, v, throughputs);
    if (*eq.p[net.source()] != net.source_cost())
        throw internal_error("source price does not meet the production cost");

    Rat out_sum = 0;
    for (int a : net.out_arcs[net.source()]) out_sum += eq.flow[a];
    if (out_sum != ps.source_inflow)
        throw internal_error("source outflow does not match X_s");
    return eq;
}

Solution solve(const Network& net) {
    if (net.kind == NetworkKind::MultiSink || net.kind == NetworkKind::MultiSource)
        throw not_series_parallel("solve needs a single-source single-sink SPG; use the "
                                  "extension entry points for multi-terminal networks");
    Solution sol;
    auto [reduced, removal] = remove_dominated_paths(net);
    sol.reduced = std::move(reduced);
    sol.removal = std::move(removal);
    sol.spd = decompose(sol.reduced);
    sol.ms = merge_sets(sol.reduced, sol.spd);
    sol.cases = classify_arcs(sol.reduced, sol.ms);
    sol.prices = backward_price(sol.reduced, sol.ms, sol.cases);
    sol.eq = forward_flow(sol.reduced, sol.ms, sol.cases, sol.prices);

    // Echo into the original network's indexing; removed arcs carry zero flow
    // and removed nodes carry no price.
    sol.full.flow.assign(net.arc_count(), Rat(0));
    sol.full.active.assign(net.arc_count(), 0);
    sol.full.X.assign(net.node_count(), Rat(0));
    sol.full.p.assign(net.node_count(), std::nullopt);
    for (int a = 0; a < sol.reduced.arc_count(); ++a) {
        auto [u, v] = sol.reduced.arcs[a];
        int oa = net.arc_between(net.index_of(sol.reduced.ids[u]),
                                 net.index_of(sol.reduced.ids[v]));
        sol.full.flow[oa] = sol.eq.flow[a];
        sol.full.active[oa] = sol.eq.active[a];
    }
    for (int v = 0; v < sol.reduced.node_count(); ++v) {
        int ov = net.index_of(sol.reduced.ids[v]);
        sol.full.X[ov] = sol.eq.X[v];
        sol.full.p[ov] = sol.eq.p[v];
    }
    return sol;
}

std::string VerificationReport::to_string() const {
    if (ok()) return "all checks passed";
    std::ostringstream os;
    for (const auto& v : violations)
        os << v.kind << " at " << v.where << ": " << v.detail << "\n";
    return os.str();
}

namespace {

// Slope coefficients recomputed from scratch: definition-based merge sets and
// the SM linear system instead of the aggregate recursion. This is the
// verifier's own route, kept independent of backward_price.
std::vector<Rat> verifier_slopes(const Network& net, const MergeSets& msd) {
    const int n = net.node_count();
    std::vector<Rat> b(n, Rat(0));
    for (std::size_t k = 0; k < net.sinks.size(); ++k) b[net.sinks[k]] = net.sink_slopes[k];
    auto order = topological_order(net);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int i = *it;
        if (net.is_sink(i)) continue;
        const auto& buyers = net.out_arcs[i];
        Rat cp_i = 0;
        for (int l : msd.c_parent[i]) cp_i += b[l];
        if (buyers.size() == 1) {
            const int j = net.arcs[buyers[0]].second;
            Rat cp_j = 0;
            for (int l : msd.c_parent[j]) cp_j += b[l];
            b[i] = (net.in_degree(j) >= 2 ? b[j] : 2 * b[j]) + cp_j;
        } else {
            // 2 b_j x_j + 2 sum_{l in C_T(i,j)} b_l X_l = D for all j, sum x = 1.
            const int m = static_cast<int>(buyers.size());
            std::vector<std::vector<Rat>> A(m + 1, std::vector<Rat>(m + 1, Rat(0)));
            std::vector<Rat> rhs(m + 1, Rat(0));
            for (int r = 0; r < m; ++r) {
                const int a = buyers[r];
                const int j = net.arcs[a].second;
                A[r][r] += 2 * b[j];
                for (int l : msd.c_trade[a]) {
                    for (int c = 0; c < m; ++c) {
                        const int ac = buyers[c];
                        const auto& ct = msd.c_trade[ac];
                        if (std::binary_search(ct.begin(), ct.end(), l)) A[r][c] += 2 * b[l];
                    }
                }
                A[r][m] -= 1;  // -D
            }
            for (int c = 0; c < m; ++c) A[m][c] = 1;
            rhs[m] = 1;
            auto x = solve_linear(A, rhs);
            // c_eff = b_j x_j + sum b_l X_l, identical across buyers
            const Rat c_eff = x[m] / 2;
            b[i] = 2 * c_eff + cp_i;
        }
    }
    return b;
}

}  // namespace

VerificationReport verify_equilibrium(const Network& net, const Equilibrium& eq) {
    VerificationReport rep;
    auto complain = [&](std::string kind, std::string where, std::string detail) {
        rep.violations.push_back({std::move(kind), std::move(where), std::move(detail)});
    };

    const int s = net.source();
    const Rat a_t = uniform_demand(net);

    // throughput consistency and conservation
    for (int v = 0; v < net.node_count(); ++v) {
        Rat in = 0, out = 0;
        for (int a : net.in_arcs[v]) in += eq.flow[a];
        for (int a : net.out_arcs[v]) out += eq.flow[a];
        if (v != s && !net.is_sink(v) && in != out)
            complain("conservation", net.ids[v],
                     "inflow " + rat_to_string(in) + " != outflow " + rat_to_string(out));
        Rat thr = (v == s) ? out : in;
        if (eq.X[v] != thr)
            complain("conservation", net.ids[v],
                     "throughput " + rat_to_string(eq.X[v]) + " != arc sum " + rat_to_string(thr));
        for (int a : net.out_arcs[v])
            if (eq.flow[a] < 0)
                complain("conservation", net.ids[v], "negative flow on an outgoing arc");
    }

    auto msd = merge_sets_by_definition(net);
    auto b = verifier_slopes(net, msd);

    auto price_fn = [&](int v) {
        Rat p = a_t - b[v] * eq.X[v];
        for (int l : msd.c_parent[v]) p -= b[l] * eq.X[l];
        return p;
    };

    // price consistency with the affine price functions
    for (int v = 0; v < net.node_count(); ++v) {
        if (!eq.p[v]) {
            if (eq.X[v] > 0) complain("price", net.ids[v], "missing price on a trading node");
            continue;
        }
        if (*eq.p[v] != price_fn(v))
            complain("price", net.ids[v],
                     "price " + rat_to_string(*eq.p[v]) + " != " + rat_to_string(price_fn(v)));
    }

    // stationarity of each firm's utility in each of its trades
    for (int i = 0; i < net.node_count(); ++i) {
        if (net.is_sink(i)) continue;
        Rat paid = (i == s) ? net.source_cost() : (eq.p[i] ? *eq.p[i] : price_fn(i));
        for (int a : net.out_arcs[i]) {
            const int j = net.arcs[a].second;
            Rat g = price_fn(j) - paid;
            for (int oa : net.out_arcs[i]) {
                const int h = net.arcs[oa].second;
                Rat dph = 0;  // -d p_h / d x_ij
                if (h == j) dph += b[h];
                for (int l : msd.c_parent[h])
                    if (l == j || reaches(net, j, l)) dph += b[l];
                g -= dph * eq.flow[oa];
            }
            if (eq.flow[a] > 0 && g != 0)
                complain("stationarity", net.ids[i] + "->" + net.ids[j],
                         "active arc has dPi/dx = " + rat_to_string(g));
            if (eq.flow[a] == 0 && g > 0)
                complain("stationarity", net.ids[i] + "->" + net.ids[j],
                         "inactive arc has dPi/dx = " + rat_to_string(g) + " > 0");
        }
    }

    // prices never decrease along consecutive active arcs
    for (int v = 0; v < net.node_count(); ++v) {
        if (v == s || net.is_sink(v)) continue;
        for (int ia : net.in_arcs[v]) {
            if (!(eq.flow[ia] > 0)) continue;
            for (int oa : net.out_arcs[v]) {
                if (!(eq.flow[oa] > 0)) continue;
                const int w = net.arcs[oa].second;
                if (eq.p[v] && eq.p[w] && *eq.p[v] > *eq.p[w])
                    complain("monotonicity", net.ids[v] + "->" + net.ids[w],
                             "price falls from " + rat_to_string(*eq.p[v]) + " to " +
                                 rat_to_string(*eq.p[w]));
            }
        }
    }

    return rep;
}

}  // namespace spchain
