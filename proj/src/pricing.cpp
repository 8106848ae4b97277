#include "spchain/pricing.hpp"

#include <algorithm>

namespace spchain {

const PriceSchedule::SmAggregates* PriceSchedule::aggregates_for(int seller) const {
    for (const auto& agg : aggregates)
        if (agg.seller == seller) return &agg;
    return nullptr;
}

namespace {

Rat sum_slopes(const std::vector<int>& nodes, const std::vector<Rat>& b) {
    Rat s = 0;
    for (int l : nodes) s += b[l];
    return s;
}

void check_obs_mc(const Network& net, const MergeSets& ms, int arc, ArcCase kase) {
    auto [i, j] = net.arcs[arc];
    const auto& cpi = ms.c_parent[i];
    const auto& cpj = ms.c_parent[j];
    auto fail = [&](const char* what) {
        throw internal_error(std::string("merge-set identity broken (") + what + ") at arc (" +
                             net.ids[i] + ", " + net.ids[j] + ")");
    };
    switch (kase) {
        case ArcCase::SS:
            if (cpi != cpj) fail("SS: C_P(j) == C_P(i)");
            break;
        case ArcCase::MS: {
            // C_P(i) == C_P(j) ⊔ {j}
            std::vector<int> want = cpj;
            want.push_back(j);
            std::sort(want.begin(), want.end());
            if (cpi != want) fail("MS: C_P(i) == C_P(j) + {j}");
            break;
        }
        case ArcCase::SM: {
            // C_P(j) == C_P(i) ⊔ C_T(i,j)
            std::vector<int> want = cpi;
            for (int l : ms.c_trade[arc]) want.push_back(l);
            std::sort(want.begin(), want.end());
            if (std::adjacent_find(want.begin(), want.end()) != want.end())
                fail("SM: C_P(i) and C_T(i,j) overlap");
            if (cpj != want) fail("SM: C_P(j) == C_P(i) + C_T(i,j)");
            break;
        }
    }
}

}  // namespace

GeneralSmResult general_sm_coefficients(const GeneralSmInput& in) {
    const int n = static_cast<int>(in.merge_nodes.size());
    if (n == 0) throw internal_error("general SM machinery needs at least one merge node");
    if (static_cast<int>(in.buyer_groups.size()) != n ||
        static_cast<int>(in.parent_groups.size()) != n)
        throw internal_error("malformed group partition for general SM seller");

    auto slope_of = [&](int v) -> const Rat& {
        auto it = in.slope.find(v);
        if (it == in.slope.end())
            throw internal_error("general SM: missing slope for a group member");
        return it->second;
    };

    GeneralSmResult out;
    out.aggregates.seller = in.seller;
    out.aggregates.merge_nodes = in.merge_nodes;
    out.aggregates.buyer_groups = in.buyer_groups;
    out.aggregates.parent_groups = in.parent_groups;
    out.aggregates.c.resize(n);

    // next_of[p] = the step whose parent group contains h_p; each merge node
    // feeds exactly one later aggregate.
    std::vector<int> next_of(n, -1);
    for (int k = 0; k < n; ++k) {
        for (int hp : in.parent_groups[k]) {
            auto it = std::find(in.merge_nodes.begin(), in.merge_nodes.end(), hp);
            if (it == in.merge_nodes.end())
                throw internal_error("general SM: parent group member is not a merge node");
            int p = static_cast<int>(it - in.merge_nodes.begin());
            if (p >= k) throw internal_error("general SM: parent group is not upstream");
            if (next_of[p] != -1) throw internal_error("general SM: merge node feeds two steps");
            next_of[p] = k;
        }
    }
    for (int p = 0; p + 1 < n; ++p)
        if (next_of[p] == -1)
            throw internal_error("general SM: a merge node has no downstream aggregate");

    for (int k = 0; k < n; ++k) {
        if (in.buyer_groups[k].empty() && in.parent_groups[k].empty())
            throw internal_error("general SM: empty aggregation step");
        Rat denom = 0;
        for (int j : in.buyer_groups[k]) denom += Rat(1) / slope_of(j);
        for (int hp : in.parent_groups[k]) {
            int p = static_cast<int>(std::find(in.merge_nodes.begin(), in.merge_nodes.end(), hp) -
                                     in.merge_nodes.begin());
            denom += Rat(1) / out.aggregates.c[p];
        }
        Rat inner = Rat(1) / denom;
        bool include_h = !(k == n - 1 && in.last_is_parent_merging);
        out.aggregates.c[k] = inner + (include_h ? slope_of(in.merge_nodes[k]) : Rat(0));
        for (int j : in.buyer_groups[k])
            out.aggregates.beta_buyer[j] = (Rat(1) / slope_of(j)) / denom;
        for (int hp : in.parent_groups[k]) {
            int p = static_cast<int>(std::find(in.merge_nodes.begin(), in.merge_nodes.end(), hp) -
                                     in.merge_nodes.begin());
            out.aggregates.beta_merge[hp] = (Rat(1) / out.aggregates.c[p]) / denom;
        }
    }

    // alpha_j = beta_j * prod of beta_p over the merge nodes j's flow passes
    // before h_n.
    for (int k = 0; k < n; ++k) {
        for (int j : in.buyer_groups[k]) {
            Rat a = out.aggregates.beta_buyer.at(j);
            int p = k;
            while (p != n - 1) {
                a *= out.aggregates.beta_merge.at(in.merge_nodes[p]);
                p = next_of[p];
            }
            out.alpha[j] = a;
        }
    }

    Rat cp_sum = 0;
    for (int l : in.cp_members) cp_sum += slope_of(l);
    out.b_seller = 2 * out.aggregates.c[n - 1] + cp_sum;
    return out;
}

PriceSchedule backward_price(const Network& net, const MergeSets& ms,
                             const std::vector<ArcCase>& cases, TieBreak tie_break) {
    const int n = net.node_count();
    const int s = net.source();
    const int t = net.sink();
    PriceSchedule ps;
    ps.b.assign(n, Rat(0));
    ps.alpha.assign(net.arc_count(), Rat(0));
    ps.has_alpha.assign(net.arc_count(), 0);
    ps.b[t] = net.sink_slope();

    auto order = topological_order(net, tie_break == TieBreak::ByIdReversed);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int i = *it;
        if (i == t) continue;
        const auto& buyers = net.out_arcs[i];
        if (buyers.size() == 1) {
            const int a = buyers[0];
            const int j = net.arcs[a].second;
            check_obs_mc(net, ms, a, cases[a]);
            const Rat cp_sum = sum_slopes(ms.c_parent[j], ps.b);
            ps.b[i] = (cases[a] == ArcCase::SS ? 2 * ps.b[j] : ps.b[j]) + cp_sum;
        } else {
            const auto& hs = ms.c_self[i];
            for (int a : buyers) {
                if (cases[a] != ArcCase::SM)
                    throw internal_error("multi-buyer seller with a non-SM arc at node '" +
                                         net.ids[i] + "'");
                check_obs_mc(net, ms, a, cases[a]);
            }
            if (hs.size() <= 1) {
                // simple SM (C_S empty happens only for multi-sink inputs)
                Rat inv_sum = 0;
                for (int a : buyers) inv_sum += Rat(1) / ps.b[net.arcs[a].second];
                Rat extra = 0;
                for (int l : hs)
                    if (!ms.in_c_parent(i, l)) extra += 2 * ps.b[l];
                ps.b[i] = Rat(2) / inv_sum + extra + sum_slopes(ms.c_parent[i], ps.b);
                for (int a : buyers) {
                    ps.alpha[a] = (Rat(1) / ps.b[net.arcs[a].second]) / inv_sum;
                    ps.has_alpha[a] = 1;
                }
            } else {
                // general SM. The merge nodes form an in-tree flowing into the
                // last one: each non-final h next merges at exactly one later
                // h, but side-by-side branches need not be comparable.
                const int nh = static_cast<int>(hs.size());
                for (int k = 0; k + 1 < nh; ++k)
                    if (ms.in_c_parent(i, hs[k]))
                        throw internal_error("non-final merge node of '" + net.ids[i] +
                                             "' is parent-merging");
                GeneralSmInput in;
                in.seller = i;
                in.merge_nodes = hs;
                in.buyer_groups.assign(hs.size(), {});
                in.parent_groups.assign(hs.size(), {});
                in.cp_members = ms.c_parent[i];
                in.last_is_parent_merging = ms.in_c_parent(i, hs.back());

                // Each buyer's merge chain is known from the decomposition;
                // consecutive chain entries give the next-merge links.
                std::map<int, int> pos_of;
                for (int k = 0; k < nh; ++k) pos_of[hs[k]] = k;
                std::vector<int> next_of(nh, -1);
                for (int a : buyers) {
                    const int j = net.arcs[a].second;
                    in.slope[j] = ps.b[j];
                    const auto& chain = ms.trade_chain[a];
                    if (chain.empty())
                        throw internal_error("buyer '" + net.ids[j] +
                                             "' never reaches a merge node of '" + net.ids[i] +
                                             "'");
                    if (pos_of.count(j))
                        throw internal_error("buyer of '" + net.ids[i] +
                                             "' is itself a merge node (MM structure)");
                    int prev = -1;
                    for (int h : chain) {
                        auto it = pos_of.find(h);
                        if (it == pos_of.end())
                            throw internal_error("merge chain leaves C_S at '" + net.ids[i] +
                                                 "'");
                        if (prev >= 0) {
                            if (next_of[prev] == -1)
                                next_of[prev] = it->second;
                            else if (next_of[prev] != it->second)
                                throw internal_error("merge structure of '" + net.ids[i] +
                                                     "' is not an in-tree");
                        }
                        prev = it->second;
                    }
                    if (prev != nh - 1)
                        throw internal_error("merge chain of buyer '" + net.ids[j] +
                                             "' does not end at the final merge node");
                    in.buyer_groups[pos_of.at(chain.front())].push_back(j);
                }
                for (int r = 0; r + 1 < nh; ++r) {
                    if (next_of[r] < 0)
                        throw internal_error("merge node '" + net.ids[hs[r]] + "' of '" +
                                             net.ids[i] + "' has no downstream aggregate");
                    in.parent_groups[next_of[r]].push_back(hs[r]);
                }
                for (int p = 0; p < nh; ++p) in.slope[hs[p]] = ps.b[hs[p]];
                for (int l : ms.c_parent[i]) in.slope[l] = ps.b[l];

                auto res = general_sm_coefficients(in);
                ps.b[i] = res.b_seller;
                for (int a : buyers) {
                    ps.alpha[a] = res.alpha.at(net.arcs[a].second);
                    ps.has_alpha[a] = 1;
                }
                ps.aggregates.push_back(std::move(res.aggregates));
            }
            Rat alpha_sum = 0;
            for (int a : buyers) {
                if (ps.alpha[a] <= 0)
                    throw internal_error("non-positive convex coefficient at node '" +
                                         net.ids[i] + "'");
                alpha_sum += ps.alpha[a];
            }
            if (alpha_sum != 1)
                throw internal_error("convex coefficients at node '" + net.ids[i] +
                                     "' do not sum to 1");
        }
        if (ps.b[i] <= 0)
            throw internal_error("non-positive slope coefficient at node '" + net.ids[i] + "'");
    }

    if (ps.b[s] < 2 * ps.b[t])
        throw internal_error("b_s < 2 b_t; pricing invariant broken");
    ps.source_inflow = (net.sink_demand() - net.source_cost()) / ps.b[s];
    if (ps.source_inflow <= 0) throw internal_error("non-positive source inflow");
    return ps;
}

Rat price_at(const Network& net, const MergeSets& ms, const PriceSchedule& ps, int node,
             const std::map<int, Rat>& X) {
    auto get = [&](int v) -> const Rat& {
        auto it = X.find(v);
        if (it == X.end())
            throw validation_error("price_at: missing throughput for node '" + net.ids[v] + "'");
        return it->second;
    };
    Rat p = uniform_demand(net) - ps.b[node] * get(node);
    for (int l : ms.c_parent[node]) p -= ps.b[l] * get(l);
    return p;
}

}  // namespace spchain
