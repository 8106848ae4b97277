#include "spchain/oracle.hpp"

#include "linear.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace spchain {

LcpSolution lcp_solve(const SMAllocationProblem& prob) {
    const int m = static_cast<int>(prob.buyer_slopes.size());
    if (m == 0) throw validation_error("allocation problem has no buyers");
    if (prob.total < 0) throw validation_error("allocation problem has negative inflow");
    for (const Rat& b : prob.buyer_slopes)
        if (b <= 0) throw validation_error("allocation problem has a non-positive slope");

    LcpSolution best;
    best.candidates_accepted = 0;

    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> act;
        for (int j = 0; j < m; ++j)
            if (mask & (1 << j)) act.push_back(j);
        const int k = static_cast<int>(act.size());

        // unknowns: x for members of act, then D
        std::vector<std::vector<Rat>> A(k + 1, std::vector<Rat>(k + 1, Rat(0)));
        std::vector<Rat> rhs(k + 1, Rat(0));
        for (int r = 0; r < k; ++r) {
            A[r][r] += 2 * prob.buyer_slopes[act[r]];
            for (int l : prob.trade_merge[act[r]]) {
                for (int c = 0; c < k; ++c) {
                    const auto& tm = prob.trade_merge[act[c]];
                    if (std::find(tm.begin(), tm.end(), l) != tm.end())
                        A[r][c] += 2 * prob.merge_slopes[l];
                }
            }
            A[r][k] = -1;
        }
        for (int c = 0; c < k; ++c) A[k][c] = 1;
        rhs[k] = prob.total;

        std::vector<Rat> sol;
        try {
            sol = solve_linear(A, rhs);
        } catch (const internal_error&) {
            continue;  // degenerate subset
        }

        bool positive = true;
        for (int r = 0; r < k; ++r)
            if (sol[r] <= 0) positive = false;
        if (!positive && !(prob.total == 0 && k == m)) continue;

        std::vector<Rat> x(m, Rat(0));
        for (int r = 0; r < k; ++r) x[act[r]] = sol[r];
        const Rat D = sol[k];

        // merge throughputs for the complementarity check on inactive buyers
        std::vector<Rat> Xl(prob.merge_slopes.size(), Rat(0));
        for (int j = 0; j < m; ++j)
            for (int l : prob.trade_merge[j]) Xl[l] += x[j];
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            if (mask & (1 << j)) continue;
            Rat inactive_value = 0;
            for (int l : prob.trade_merge[j]) inactive_value += 2 * prob.merge_slopes[l] * Xl[l];
            if (inactive_value < D) ok = false;  // could still profit from buyer j
        }
        if (!ok) continue;

        best.candidates_accepted += 1;
        if (best.candidates_accepted > 1)
            throw internal_error("lcp_solve accepted two candidates; uniqueness broken");
        best.x = x;
        best.active.assign(m, 0);
        for (int r = 0; r < k; ++r) best.active[act[r]] = 1;
        best.level = D;
    }
    if (best.candidates_accepted == 0)
        throw validation_error("lcp_solve found no feasible active set; malformed problem");
    return best;
}

SMAllocationProblem sm_problem_at(const Network& net, const MergeSets& ms,
                                  const PriceSchedule& ps, const Equilibrium& eq, int seller) {
    SMAllocationProblem prob;
    const auto& buyers = net.out_arcs[seller];
    std::map<int, int> merge_pos;
    for (int a : buyers) {
        prob.buyer_slopes.push_back(ps.b[net.arcs[a].second]);
        std::vector<int> tm;
        for (int l : ms.c_trade[a]) {
            auto [it, fresh] = merge_pos.try_emplace(l, static_cast<int>(prob.merge_slopes.size()));
            if (fresh) prob.merge_slopes.push_back(ps.b[l]);
            tm.push_back(it->second);
        }
        prob.trade_merge.push_back(std::move(tm));
    }
    prob.total = eq.X[seller];
    prob.demand = uniform_demand(net);
    Rat cp = 0, cpx = 0;
    for (int l : ms.c_parent[seller]) {
        cp += ps.b[l];
        cpx += ps.b[l] * eq.X[l];
    }
    const Rat paid = eq.p[seller] ? *eq.p[seller] : net.source_cost();
    prob.const_term = cp * eq.X[seller] + cpx + paid;
    return prob;
}

namespace {

// Flows recomputed after one firm's outflow vector is replaced: everyone else
// keeps its split, firms below respond with their convex coefficients.
std::vector<Rat> propagate(const Network& net, const PriceSchedule& ps, const Equilibrium& eq,
                           int firm, const std::vector<Rat>& firm_out, const Rat& firm_total) {
    std::vector<Rat> X(net.node_count(), Rat(0));
    std::vector<Rat> flow(net.arc_count(), Rat(0));
    const int s = net.source();
    X[s] = (firm == s) ? firm_total : eq.X[s];
    for (int i : topological_order(net)) {
        if (net.is_sink(i)) continue;
        const auto& buyers = net.out_arcs[i];
        if (i == firm) {
            for (std::size_t k = 0; k < buyers.size(); ++k) flow[buyers[k]] = firm_out[k];
        } else if (buyers.size() == 1) {
            flow[buyers[0]] = X[i];
        } else {
            for (int a : buyers) flow[a] = ps.alpha[a] * X[i];
        }
        for (int a : buyers) X[net.arcs[a].second] += flow[a];
    }
    return flow;
}

Rat utility_of(const Network& net, const MergeSets& ms, const PriceSchedule& ps, int firm,
               const std::vector<Rat>& flow, const Rat& paid_per_unit) {
    std::vector<Rat> X(net.node_count(), Rat(0));
    for (int a = 0; a < net.arc_count(); ++a) X[net.arcs[a].second] += flow[a];
    const int s = net.source();
    X[s] = 0;
    for (int a : net.out_arcs[s]) X[s] += flow[a];
    std::map<int, Rat> thr;
    for (int v = 0; v < net.node_count(); ++v) thr[v] = X[v];
    Rat revenue = 0, quantity = 0;
    for (int a : net.out_arcs[firm]) {
        revenue += price_at(net, ms, ps, net.arcs[a].second, thr) * flow[a];
        quantity += flow[a];
    }
    return revenue - paid_per_unit * quantity;
}

}  // namespace

BrReport best_response_check(const Network& net, const MergeSets& ms,
                             const std::vector<ArcCase>& cases, const PriceSchedule& ps,
                             const Equilibrium& eq, int firm, const BrOptions& opts) {
    (void)cases;
    const int s = net.source();
    if (net.is_sink(firm)) throw validation_error("a sink market is not a firm");
    const auto& buyers = net.out_arcs[firm];
    const int m = static_cast<int>(buyers.size());
    const Rat paid = (firm == s) ? net.source_cost()
                                 : (eq.p[firm] ? *eq.p[firm] : uniform_demand(net));

    BrReport rep;
    std::vector<Rat> base_out(m);
    for (int k = 0; k < m; ++k) base_out[k] = eq.flow[buyers[k]];
    rep.base_utility =
        utility_of(net, ms, ps, firm, propagate(net, ps, eq, firm, base_out, eq.X[firm]), paid);
    rep.max_gain = 0;
    rep.best_deviation = "none";

    const Rat pitch = eq.X[s] / opts.grid;
    auto consider = [&](const std::vector<Rat>& out, const Rat& total, const std::string& what) {
        Rat u = utility_of(net, ms, ps, firm, propagate(net, ps, eq, firm, out, total), paid);
        if (u - rep.base_utility > rep.max_gain) {
            rep.max_gain = u - rep.base_utility;
            rep.best_deviation = what;
        }
    };

    if (firm == s) {
        // total-quantity deviations, each distributed by the equilibrium split
        for (int step = 0; step <= opts.grid * opts.total_span; ++step) {
            const Rat total = pitch * step;
            std::vector<Rat> out(m);
            for (int k = 0; k < m; ++k)
                out[k] = (m == 1) ? total : ps.alpha[buyers[k]] * total;
            consider(out, total, "total=" + rat_to_string(total));
        }
    }
    // split deviations at the firm's own inflow
    for (int a = 0; a < m; ++a) {
        for (int bdx = 0; bdx < m; ++bdx) {
            if (a == bdx) continue;
            for (int step = 1; step <= opts.grid; ++step) {
                Rat delta = pitch * step;
                if (delta > base_out[bdx]) delta = base_out[bdx];
                std::vector<Rat> out = base_out;
                out[a] += delta;
                out[bdx] -= delta;
                consider(out, eq.X[firm],
                         "move " + rat_to_string(delta) + " to arc " +
                             net.ids[net.arcs[buyers[a]].first] + "->" +
                             net.ids[net.arcs[buyers[a]].second]);
                if (delta == base_out[bdx]) break;
            }
        }
    }
    return rep;
}

Rat posted_offer_utility(const Network& net, const MergeSets& ms, const PriceSchedule& ps,
                         const Rat& price, const Rat& quantity) {
    const int s = net.source();
    if (net.out_degree(s) != 1)
        throw validation_error("posted offers are modeled for single-buyer sources");
    const int j = net.arcs[net.out_arcs[s][0]].second;
    // Willingness p_j(x) = a_t - (b_j + sum_{l in C_P(j)} b_l) x, since every
    // unit the buyer takes passes through each of its parent-merging children.
    Rat slope = ps.b[j];
    for (int l : ms.c_parent[j]) slope += ps.b[l];
    Rat accept = (uniform_demand(net) - price) / slope;
    if (accept < 0) accept = 0;
    if (accept > quantity) accept = quantity;
    return price * accept - net.source_cost() * quantity;
}

GeneratedSPG generate_spg(const RandomSPGSpec& spec) {
    if (spec.max_nodes < 3) throw validation_error("node budget must be at least 3");
    std::mt19937_64 rng(spec.seed);
    auto coin = [&](double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
    };
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    // Composition tree: 0 = arc, otherwise split an interior-node budget.
    // Every composition consumes its whole budget, so the node count comes
    // out at exactly max_nodes.
    struct TNode {
        int kind;  // 0 arc, 1 series, 2 parallel
        int l = -1, r = -1;
    };
    std::vector<TNode> tn;
    auto make_arc = [&]() {
        tn.push_back({0});
        return static_cast<int>(tn.size()) - 1;
    };
    auto make = [&](int kind, int l, int r) {
        tn.push_back({kind, l, r});
        return static_cast<int>(tn.size()) - 1;
    };
    // gen(budget, forbid_bare): consumes exactly `budget` interior nodes; a
    // bare arc on a parallel side would be a parallel arc or a shortcut, so
    // sides are generated with forbid_bare and a budget of at least one.
    auto gen = [&](auto&& self, int budget, bool forbid_bare) -> int {
        if (budget == 0) {
            if (forbid_bare) throw internal_error("generator: bare side with zero budget");
            return make_arc();
        }
        if (budget == 1 || coin(spec.series_bias)) {
            int lb = pick(0, budget - 1);
            return make(1, self(self, lb, false), self(self, budget - 1 - lb, false));
        }
        int lb = pick(1, budget - 1);
        return make(2, self(self, lb, true), self(self, budget - lb, true));
    };
    int root = gen(gen, spec.max_nodes - 2, false);
    if (tn[root].kind == 0) root = make(1, make_arc(), make_arc());

    // Materialize with fresh junction node names.
    std::vector<std::pair<std::string, std::string>> arcs;
    int next_id = 0;
    auto fresh = [&]() {
        std::ostringstream os;
        os << "v" << std::setw(3) << std::setfill('0') << next_id++;
        return os.str();
    };
    auto emit = [&](auto&& self, int node, const std::string& src,
                    const std::string& dst) -> void {
        const TNode& nd = tn[node];
        if (nd.kind == 0) {
            arcs.emplace_back(src, dst);
        } else if (nd.kind == 1) {
            std::string mid = fresh();
            self(self, nd.l, src, mid);
            self(self, nd.r, mid, dst);
        } else {
            self(self, nd.l, src, dst);
            self(self, nd.r, src, dst);
        }
    };
    emit(emit, root, "s", "t");

    std::vector<std::string> node_ids{"s", "t"};
    for (int k = 0; k < next_id; ++k) {
        std::ostringstream os;
        os << "v" << std::setw(3) << std::setfill('0') << k;
        node_ids.push_back(os.str());
    }

    auto rnd_rat = [&](int num_lo, int num_hi, int den_hi) {
        return Rat(pick(num_lo, num_hi)) / Rat(pick(1, den_hi));
    };
    Rat a_s = rnd_rat(1, 12, 4);
    Rat a_t = a_s + rnd_rat(1, 24, 4);
    Rat b_t = rnd_rat(1, 8, 4);

    GeneratedSPG out;
    out.net = make_network(std::move(node_ids), std::move(arcs), {{"s", a_s}},
                           {{"t", a_t, b_t}});
    out.spd = decompose(out.net);
    return out;
}

}  // namespace spchain
