#include "spchain/structure.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace spchain {

bool MergeSets::in_c_parent(int node, int l) const {
    const auto& v = c_parent[node];
    return std::binary_search(v.begin(), v.end(), l);
}

const char* arc_case_name(ArcCase c) {
    switch (c) {
        case ArcCase::SS: return "SS";
        case ArcCase::MS: return "MS";
        case ArcCase::SM: return "SM";
    }
    return "?";
}

std::vector<int> descendants(const Network& net, int v) {
    std::vector<char> seen(net.node_count(), 0);
    std::queue<int> q;
    q.push(v);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int a : net.out_arcs[u]) {
            int w = net.arcs[a].second;
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
        }
    }
    std::vector<int> out;
    for (int u = 0; u < net.node_count(); ++u)
        if (seen[u] && u != v) out.push_back(u);
    return out;
}

std::vector<int> ancestors(const Network& net, int v) {
    std::vector<char> seen(net.node_count(), 0);
    std::queue<int> q;
    q.push(v);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int a : net.in_arcs[u]) {
            int w = net.arcs[a].first;
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
        }
    }
    std::vector<int> out;
    for (int u = 0; u < net.node_count(); ++u)
        if (seen[u] && u != v) out.push_back(u);
    return out;
}

namespace {

// Two node-disjoint i->j paths, by two augmentations on the node-split graph.
// Interior nodes get capacity one; i and j are uncapacitated.
struct DisjointPathFinder {
    const Network& net;
    int s, t;
    // node v splits into v_in = 2v, v_out = 2v+1
    std::map<std::pair<int, int>, int> flow;  // directed residual bookkeeping

    DisjointPathFinder(const Network& n, int s_, int t_) : net(n), s(s_), t(t_) {}

    int cap(int a, int b) const {
        auto it = flow.find({a, b});
        int used = it == flow.end() ? 0 : it->second;
        return 1 - used;
    }

    bool augment() {
        const int N = 2 * net.node_count();
        std::vector<int> prev(N, -1);
        std::vector<char> seen(N, 0);
        std::queue<int> q;
        int start = 2 * s + 1;
        int goal = 2 * t;
        q.push(start);
        seen[start] = 1;
        auto push = [&](int from, int to) {
            if (!seen[to]) {
                seen[to] = 1;
                prev[to] = from;
                q.push(to);
            }
        };
        while (!q.empty() && !seen[goal]) {
            int x = q.front();
            q.pop();
            int v = x / 2;
            bool is_out = x % 2;
            if (is_out) {
                for (int a : net.out_arcs[v]) {
                    int w = net.arcs[a].second;
                    if (cap(x, 2 * w) > 0) push(x, 2 * w);
                }
            } else {
                // through the node (capacity 1 unless terminal)
                if (v == s || v == t || cap(x, 2 * v + 1) > 0) push(x, 2 * v + 1);
            }
            // residual (reverse) edges
            for (auto& [k, f] : flow) {
                if (k.second == x && f > 0) push(x, k.first);
            }
        }
        if (!seen[goal]) return false;
        int x = goal;
        while (x != start) {
            int p = prev[x];
            flow[{p, x}] += 1;
            auto rit = flow.find({x, p});
            if (rit != flow.end() && rit->second > 0) {
                flow[{p, x}] -= 1;
                rit->second -= 1;
            }
            x = p;
        }
        return true;
    }

    bool has_two() {
        return augment() && augment();
    }
};

std::vector<int> compute_topo_pos(const Network& net) {
    auto order = topological_order(net);
    std::vector<int> pos(net.node_count());
    for (int k = 0; k < static_cast<int>(order.size()); ++k) pos[order[k]] = k;
    return pos;
}

void sort_by_topo(std::vector<int>& v, const std::vector<int>& pos) {
    std::sort(v.begin(), v.end(), [&](int a, int b) { return pos[a] < pos[b]; });
}

// The chains must come in ms.trade_chain (nearest merge first); this derives
// c_trade and fixes up the orderings.
void finish_merge_sets(const Network& net, MergeSets& ms) {
    ms.topo_pos = compute_topo_pos(net);
    for (auto& v : ms.c_self) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        sort_by_topo(v, ms.topo_pos);
    }
    for (auto& v : ms.c_parent) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    ms.c_trade.assign(net.arc_count(), {});
    for (int a = 0; a < net.arc_count(); ++a) {
        const int i = net.arcs[a].first;
        for (int h : ms.trade_chain[a])
            if (!ms.in_c_parent(i, h)) ms.c_trade[a].push_back(h);
        std::sort(ms.c_trade[a].begin(), ms.c_trade[a].end());
    }
}

}  // namespace

bool two_disjoint_paths(const Network& net, int i, int j) {
    if (i == j) return false;
    return DisjointPathFinder(net, i, j).has_two();
}

MergeSets merge_sets_by_definition(const Network& net) {
    const int n = net.node_count();
    MergeSets ms;
    ms.c_self.assign(n, {});
    ms.c_parent.assign(n, {});
    std::vector<std::vector<int>> self_of(n);
    for (int i = 0; i < n; ++i) {
        for (int j : descendants(net, i))
            if (two_disjoint_paths(net, i, j)) self_of[i].push_back(j);
        ms.c_self[i] = self_of[i];
    }
    for (int i = 0; i < n; ++i) {
        std::set<int> cp;
        std::vector<char> is_desc(n, 0);
        for (int d : descendants(net, i)) is_desc[d] = 1;
        for (int k : ancestors(net, i))
            for (int j : self_of[k])
                if (is_desc[j]) cp.insert(j);
        ms.c_parent[i].assign(cp.begin(), cp.end());
    }
    auto pos = compute_topo_pos(net);
    ms.trade_chain.assign(net.arc_count(), {});
    for (int a = 0; a < net.arc_count(); ++a) {
        auto [i, j] = net.arcs[a];
        for (int h : self_of[i])
            if (h == j || reaches(net, j, h)) ms.trade_chain[a].push_back(h);
        sort_by_topo(ms.trade_chain[a], pos);
    }
    finish_merge_sets(net, ms);
    return ms;
}

MergeSets merge_sets(const Network& net, const SPDecomposition& spd) {
    const int n = net.node_count();
    MergeSets ms;
    ms.c_self.assign(n, {});
    ms.c_parent.assign(n, {});

    // Walk the tree once carrying the chain of enclosing parallel compositions.
    // For a parallel P with terminals (σ, τ): τ ∈ C_S(σ), and τ ∈ C_P(v) for
    // every v strictly inside P.
    struct Frame {
        int tree_node;
        int parallels_pushed;
    };
    std::vector<std::pair<int, int>> pstack;  // (source, sink) of enclosing parallels
    std::vector<Frame> stack{{spd.root, 0}};
    std::vector<std::set<int>> cs(n), cp(n);
    ms.trade_chain.assign(net.arc_count(), {});
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.tree_node < 0) {  // marker: pop f.parallels_pushed entries
            for (int k = 0; k < f.parallels_pushed; ++k) pstack.pop_back();
            continue;
        }
        const auto& tn = spd.at(f.tree_node);
        if (tn.kind == SPDecomposition::Kind::Arc) {
            for (int x : {tn.source, tn.sink}) {
                for (const auto& [src, snk] : pstack) {
                    if (x == src)
                        cs[x].insert(snk);
                    else if (x != snk)
                        cp[x].insert(snk);
                }
            }
            // merge nodes this arc's flow passes: enclosing parallels sourced
            // at the tail, innermost first
            auto& chain = ms.trade_chain[net.arc_between(tn.source, tn.sink)];
            for (auto it = pstack.rbegin(); it != pstack.rend(); ++it) {
                if (it->first != tn.source) continue;
                if (chain.empty() || chain.back() != it->second) chain.push_back(it->second);
            }
            continue;
        }
        int pushed = 0;
        if (tn.kind == SPDecomposition::Kind::Parallel) {
            pstack.emplace_back(tn.source, tn.sink);
            pushed = 1;
        }
        stack.push_back({-1, pushed});
        stack.push_back({tn.right, 0});
        stack.push_back({tn.left, 0});
    }
    for (int v = 0; v < n; ++v) {
        ms.c_self[v].assign(cs[v].begin(), cs[v].end());
        ms.c_parent[v].assign(cp[v].begin(), cp[v].end());
    }
    finish_merge_sets(net, ms);
    return ms;
}

MergeSets merge_sets(const Network& net) { return merge_sets(net, decompose(net)); }

std::vector<ArcCase> classify_arcs(const Network& net, const MergeSets& ms) {
    (void)ms;
    std::vector<ArcCase> cases(net.arc_count());
    for (int a = 0; a < net.arc_count(); ++a) {
        auto [i, j] = net.arcs[a];
        bool multi_buyers = net.out_degree(i) >= 2;
        bool multi_sellers = net.in_degree(j) >= 2;
        if (multi_buyers && multi_sellers)
            throw internal_error("MM arc (" + net.ids[i] + ", " + net.ids[j] +
                                 "): input is not a shortcut-free SPG");
        cases[a] = multi_buyers ? ArcCase::SM : multi_sellers ? ArcCase::MS : ArcCase::SS;
    }
    return cases;
}

std::vector<std::vector<int>> dominating_parents(const Network& net) {
    const int n = net.node_count();
    const int s = net.sources.at(0);
    std::vector<std::vector<int>> dom(n);
    for (int v : topological_order(net)) {
        if (v == s) {
            dom[v] = {v};
            continue;
        }
        std::vector<int> acc;
        bool first = true;
        for (int a : net.in_arcs[v]) {
            int u = net.arcs[a].first;
            if (first) {
                acc = dom[u];
                first = false;
            } else {
                std::vector<int> merged;
                std::set_intersection(acc.begin(), acc.end(), dom[u].begin(), dom[u].end(),
                                      std::back_inserter(merged));
                acc = std::move(merged);
            }
        }
        acc.push_back(v);
        std::sort(acc.begin(), acc.end());
        dom[v] = std::move(acc);
    }
    for (int v = 0; v < n; ++v)
        dom[v].erase(std::remove(dom[v].begin(), dom[v].end(), v), dom[v].end());
    return dom;
}

std::pair<Network, RemovalReport> remove_dominated_paths(const Network& net) {
    // Work on id-level arc sets so the surviving network can be rebuilt cleanly.
    auto current = net;
    RemovalReport report;
    std::set<std::pair<std::string, std::string>> removed;

    for (int pass = 0;; ++pass) {
        // Shortcut arcs, tails in topological order.
        std::vector<int> shortcut_arcs;
        auto pos = topological_order(current);
        std::vector<int> order_of(current.node_count());
        for (int k = 0; k < current.node_count(); ++k) order_of[pos[k]] = k;
        for (int a = 0; a < current.arc_count(); ++a) {
            auto [i, j] = current.arcs[a];
            // A shortcut tail needs another way out and its head another way
            // in, so only MM-degree arcs qualify.
            if (current.out_degree(i) < 2 || current.in_degree(j) < 2) continue;
            // Longer i->j path: some other out-arc of i reaches j.
            bool longer = false;
            for (int oa : current.out_arcs[i]) {
                if (oa == a) continue;
                int w = current.arcs[oa].second;
                if (w == j) continue;  // would be a parallel arc; rejected upstream
                if (reaches(current, w, j)) {
                    longer = true;
                    break;
                }
            }
            if (longer) shortcut_arcs.push_back(a);
        }
        if (shortcut_arcs.empty()) {
            if (pass > 0) {
                // fixed-point re-scan done; report the overall removals
                report.removed_arcs.assign(removed.begin(), removed.end());
                std::set<std::string> live;
                for (const auto& id : current.ids) live.insert(id);
                for (const auto& id : net.ids)
                    if (!live.count(id)) report.removed_nodes.push_back(id);
            }
            return {std::move(current), std::move(report)};
        }
        std::sort(shortcut_arcs.begin(), shortcut_arcs.end(), [&](int a, int b) {
            return order_of[current.arcs[a].first] < order_of[current.arcs[b].first];
        });

        std::set<int> doomed;
        for (int sa : shortcut_arcs) {
            auto [i, j] = current.arcs[sa];
            RemovalReport::Shortcut entry;
            entry.arc = {current.ids[i], current.ids[j]};
            // Every arc (u,v) != (i,j) on an i->j path is dominated.
            std::vector<char> from_i(current.node_count(), 0), to_j(current.node_count(), 0);
            from_i[i] = 1;
            for (int v = 0; v < current.node_count(); ++v)
                if (v != i) from_i[v] = reaches(current, i, v);
            to_j[j] = 1;
            for (int v = 0; v < current.node_count(); ++v)
                if (v != j) to_j[v] = reaches(current, v, j);
            for (int a = 0; a < current.arc_count(); ++a) {
                if (a == sa) continue;
                auto [u, v] = current.arcs[a];
                if (from_i[u] && to_j[v]) {
                    if (doomed.insert(a).second) {
                        entry.removed_arcs.emplace_back(current.ids[u], current.ids[v]);
                        removed.insert({current.ids[u], current.ids[v]});
                    }
                }
            }
            if (!entry.removed_arcs.empty()) report.shortcuts.push_back(std::move(entry));
        }

        // Rebuild without doomed arcs; drop nodes that became isolated.
        std::vector<std::pair<std::string, std::string>> kept;
        std::set<std::string> touched;
        for (int a = 0; a < current.arc_count(); ++a) {
            if (doomed.count(a)) continue;
            auto [u, v] = current.arcs[a];
            kept.emplace_back(current.ids[u], current.ids[v]);
            touched.insert(current.ids[u]);
            touched.insert(current.ids[v]);
        }
        std::vector<std::string> node_ids;
        for (const auto& id : current.ids)
            if (touched.count(id)) node_ids.push_back(id);
        std::vector<std::pair<std::string, Rat>> srcs;
        for (std::size_t k = 0; k < current.sources.size(); ++k)
            srcs.emplace_back(current.ids[current.sources[k]], current.source_costs[k]);
        std::vector<std::tuple<std::string, Rat, Rat>> snks;
        for (std::size_t k = 0; k < current.sinks.size(); ++k)
            snks.emplace_back(current.ids[current.sinks[k]], current.sink_demands[k],
                              current.sink_slopes[k]);
        current = make_network(std::move(node_ids), std::move(kept), std::move(srcs),
                               std::move(snks));
    }
}

}  // namespace spchain
