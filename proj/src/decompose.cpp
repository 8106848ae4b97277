#include "spchain/decompose.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace spchain {

std::vector<std::pair<int, int>> SPDecomposition::leaf_arcs(int index) const {
    std::vector<std::pair<int, int>> out;
    std::vector<int> stack{index < 0 ? root : index};
    while (!stack.empty()) {
        const Node& n = nodes[stack.back()];
        stack.pop_back();
        if (n.kind == Kind::Arc) {
            out.emplace_back(n.source, n.sink);
        } else {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    return out;
}

std::vector<int> SPDecomposition::subtree_nodes(int index) const {
    std::set<int> s;
    for (auto [u, v] : leaf_arcs(index)) {
        s.insert(u);
        s.insert(v);
    }
    return {s.begin(), s.end()};
}

std::vector<int> SPDecomposition::preorder() const {
    std::vector<int> out;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        out.push_back(i);
        const Node& n = nodes[i];
        if (n.kind != Kind::Arc) {
            stack.push_back(n.right);
            stack.push_back(n.left);
        }
    }
    return out;
}

std::string SPDecomposition::describe(const Network& net) const {
    std::ostringstream os;
    auto order = preorder();
    std::unordered_map<int, int> pos;
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = static_cast<int>(k);
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Node& n = nodes[order[k]];
        os << k << " ";
        switch (n.kind) {
            case Kind::Arc: os << "Arc"; break;
            case Kind::Series: os << "Series"; break;
            case Kind::Parallel: os << "Parallel"; break;
        }
        os << " " << net.ids[n.source] << "->" << net.ids[n.sink];
        if (n.kind != Kind::Arc)
            os << " children " << pos[n.left] << " " << pos[n.right];
        os << "\n";
    }
    return os.str();
}

namespace {

// Working multigraph for the reduction. Parallel arcs appear transiently even
// on simple inputs once interior nodes are contracted.
struct Reducer {
    struct Edge {
        int u, v;
        int tree;
        bool alive = true;
    };

    const Network& net;
    SPDecomposition tree;
    std::vector<Edge> edges;
    std::vector<int> out_deg, in_deg;
    std::vector<std::vector<int>> out_e, in_e;
    std::unordered_map<long long, int> by_pair;  // (u,v) -> live edge id
    std::deque<int> series_candidates;
    int live_edges = 0;

    explicit Reducer(const Network& n) : net(n) {
        const int nn = net.node_count();
        out_deg.assign(nn, 0);
        in_deg.assign(nn, 0);
        out_e.assign(nn, {});
        in_e.assign(nn, {});
    }

    long long key(int u, int v) const {
        return static_cast<long long>(u) * net.node_count() + v;
    }

    int make_tree(SPDecomposition::Kind k, int l, int r, int s, int t) {
        tree.nodes.push_back({k, l, r, s, t});
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    void consider_series(int w) {
        if (w != net.sources[0] && w != net.sinks[0] && out_deg[w] == 1 && in_deg[w] == 1)
            series_candidates.push_back(w);
    }

    void add_edge(int u, int v, int t) {
        auto it = by_pair.find(key(u, v));
        if (it != by_pair.end() && edges[it->second].alive) {
            // parallel composition with the edge already in place
            Edge& e = edges[it->second];
            e.tree = make_tree(SPDecomposition::Kind::Parallel, e.tree, t, u, v);
            return;
        }
        int id = static_cast<int>(edges.size());
        edges.push_back({u, v, t});
        by_pair[key(u, v)] = id;
        out_e[u].push_back(id);
        in_e[v].push_back(id);
        ++out_deg[u];
        ++in_deg[v];
        ++live_edges;
        consider_series(u);
        consider_series(v);
    }

    void kill_edge(int id) {
        Edge& e = edges[id];
        e.alive = false;
        --out_deg[e.u];
        --in_deg[e.v];
        --live_edges;
        auto it = by_pair.find(key(e.u, e.v));
        if (it != by_pair.end() && it->second == id) by_pair.erase(it);
    }

    int live_out(int w) {
        while (!out_e[w].empty() && !edges[out_e[w].back()].alive) out_e[w].pop_back();
        for (std::size_t i = 0; i < out_e[w].size(); ++i)
            if (edges[out_e[w][i]].alive) return out_e[w][i];
        return -1;
    }

    int live_in(int w) {
        while (!in_e[w].empty() && !edges[in_e[w].back()].alive) in_e[w].pop_back();
        for (std::size_t i = 0; i < in_e[w].size(); ++i)
            if (edges[in_e[w][i]].alive) return in_e[w][i];
        return -1;
    }

    SPDecomposition run() {
        for (auto [u, v] : net.arcs)
            add_edge(u, v, make_tree(SPDecomposition::Kind::Arc, -1, -1, u, v));
        while (!series_candidates.empty()) {
            int w = series_candidates.front();
            series_candidates.pop_front();
            if (out_deg[w] != 1 || in_deg[w] != 1) continue;
            int ein = live_in(w);
            int eout = live_out(w);
            Edge in = edges[ein];
            Edge out = edges[eout];
            kill_edge(ein);
            kill_edge(eout);
            int t = make_tree(SPDecomposition::Kind::Series, in.tree, out.tree, in.u, out.v);
            add_edge(in.u, out.v, t);
            consider_series(in.u);
            consider_series(out.v);
        }
        if (live_edges != 1)
            throw not_series_parallel("network is not series-parallel (reduction stops with " +
                                      std::to_string(live_edges) + " edges)");
        for (const auto& e : edges) {
            if (!e.alive) continue;
            if (e.u != net.sources[0] || e.v != net.sinks[0])
                throw not_series_parallel("reduction did not end at the source-sink pair");
            tree.root = e.tree;
        }
        return std::move(tree);
    }
};

}  // namespace

bool is_series_parallel(const Network& net) {
    if (net.sources.size() != 1 || net.sinks.size() != 1) return false;
    try {
        Reducer(net).run();
        return true;
    } catch (const not_series_parallel&) {
        return false;
    }
}

SPDecomposition decompose(const Network& net) {
    if (net.sources.size() != 1 || net.sinks.size() != 1)
        throw not_series_parallel("decomposition needs a single source and a single sink");
    return Reducer(net).run();
}

}  // namespace spchain
