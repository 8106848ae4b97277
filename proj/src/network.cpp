#include "spchain/network.hpp"

#include "spchain/decompose.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace spchain {

const char* kind_name(NetworkKind k) {
    switch (k) {
        case NetworkKind::Spg: return "single-sink SPG";
        case NetworkKind::GeneralDag: return "general DAG";
        case NetworkKind::MultiSink: return "SMSPG";
        case NetworkKind::MultiSource: return "MSSPG";
    }
    return "?";
}

int Network::source() const {
    if (sources.size() != 1) throw validation_error("network has multiple sources");
    return sources[0];
}

int Network::sink() const {
    if (sinks.size() != 1) throw validation_error("network has multiple sinks");
    return sinks[0];
}

const Rat& Network::source_cost() const {
    source();
    return source_costs[0];
}

const Rat& Network::sink_demand() const {
    sink();
    return sink_demands[0];
}

const Rat& Network::sink_slope() const {
    sink();
    return sink_slopes[0];
}

bool has_uniform_demand(const Network& net) {
    for (const Rat& d : net.sink_demands)
        if (d != net.sink_demands[0]) return false;
    return true;
}

const Rat& uniform_demand(const Network& net) {
    if (!has_uniform_demand(net))
        throw validation_error("sinks do not share a common demand");
    return net.sink_demands[0];
}

bool Network::is_source(int v) const {
    return std::find(sources.begin(), sources.end(), v) != sources.end();
}

bool Network::is_sink(int v) const {
    return std::find(sinks.begin(), sinks.end(), v) != sinks.end();
}

int Network::find_node(const std::string& id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return -1;
    return static_cast<int>(it - ids.begin());
}

int Network::index_of(const std::string& id) const {
    int v = find_node(id);
    if (v < 0) throw validation_error("unknown node id '" + id + "'");
    return v;
}

int Network::arc_between(int seller, int buyer) const {
    auto it = std::lower_bound(arcs.begin(), arcs.end(), std::make_pair(seller, buyer));
    if (it == arcs.end() || *it != std::make_pair(seller, buyer)) return -1;
    return static_cast<int>(it - arcs.begin());
}

std::vector<int> topological_order(const Network& net, bool reversed_ties) {
    const int n = net.node_count();
    std::vector<int> indeg(n);
    for (int v = 0; v < n; ++v) indeg[v] = net.in_degree(v);
    auto cmp = [reversed_ties](int a, int b) { return reversed_ties ? a < b : a > b; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int a : net.out_arcs[v]) {
            int w = net.arcs[a].second;
            if (--indeg[w] == 0) ready.push(w);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        for (int v = 0; v < n; ++v)
            if (indeg[v] > 0)
                throw validation_error("cycle through node '" + net.ids[v] + "'");
    }
    return order;
}

bool reaches(const Network& net, int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(net.node_count(), 0);
    std::queue<int> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int a : net.out_arcs[v]) {
            int w = net.arcs[a].second;
            if (w == to) return true;
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
        }
    }
    return false;
}

Network make_network(std::vector<std::string> node_ids,
                     std::vector<std::pair<std::string, std::string>> arc_ids,
                     std::vector<std::pair<std::string, Rat>> sources,
                     std::vector<std::tuple<std::string, Rat, Rat>> sinks) {
    Network net;
    {
        std::set<std::string> seen;
        for (const auto& id : node_ids) {
            if (id.empty()) throw validation_error("empty node id");
            if (!seen.insert(id).second)
                throw validation_error("duplicate node id '" + id + "'");
        }
    }
    net.ids = std::move(node_ids);
    std::sort(net.ids.begin(), net.ids.end());

    std::set<std::pair<int, int>> arc_set;
    for (const auto& [u_id, v_id] : arc_ids) {
        int u = net.index_of(u_id);
        int v = net.index_of(v_id);
        if (u == v) throw validation_error("self-loop at node '" + u_id + "'");
        if (!arc_set.insert({u, v}).second)
            throw validation_error("parallel arc (" + u_id + ", " + v_id + ")");
    }
    net.arcs.assign(arc_set.begin(), arc_set.end());
    net.out_arcs.assign(net.ids.size(), {});
    net.in_arcs.assign(net.ids.size(), {});
    for (int a = 0; a < net.arc_count(); ++a) {
        net.out_arcs[net.arcs[a].first].push_back(a);
        net.in_arcs[net.arcs[a].second].push_back(a);
    }

    if (sources.empty()) throw validation_error("no source given");
    if (sinks.empty()) throw validation_error("no sink given");
    std::sort(sources.begin(), sources.end());
    std::sort(sinks.begin(), sinks.end());
    for (const auto& [id, cost] : sources) {
        int v = net.index_of(id);
        if (net.is_source(v)) throw validation_error("duplicate source '" + id + "'");
        if (cost <= 0)
            throw validation_error("source '" + id + "': cost must be positive");
        net.sources.push_back(v);
        net.source_costs.push_back(cost);
    }
    for (const auto& [id, demand, slope] : sinks) {
        int v = net.index_of(id);
        if (net.is_sink(v)) throw validation_error("duplicate sink '" + id + "'");
        if (net.is_source(v))
            throw validation_error("node '" + id + "' is both source and sink");
        if (slope <= 0)
            throw validation_error("sink '" + id + "': slope must be positive");
        net.sinks.push_back(v);
        net.sink_demands.push_back(demand);
        net.sink_slopes.push_back(slope);
    }
    for (std::size_t si = 0; si < net.sinks.size(); ++si) {
        for (std::size_t so = 0; so < net.sources.size(); ++so) {
            if (net.sink_demands[si] <= net.source_costs[so])
                throw validation_error("sink '" + net.ids[net.sinks[si]] +
                                       "': demand must exceed cost of source '" +
                                       net.ids[net.sources[so]] + "'");
        }
    }
    if (net.sources.size() > 1 && net.sinks.size() > 1)
        throw validation_error("at most one of sources/sinks may be multiple");

    for (int v = 0; v < net.node_count(); ++v) {
        if (net.is_source(v)) {
            if (net.in_degree(v) > 0)
                throw validation_error("source '" + net.ids[v] + "' has an incoming arc");
            if (net.out_degree(v) == 0)
                throw validation_error("source '" + net.ids[v] + "' has no outgoing arc");
        } else if (net.is_sink(v)) {
            if (net.out_degree(v) > 0)
                throw validation_error("sink '" + net.ids[v] + "' has an outgoing arc");
            if (net.in_degree(v) == 0)
                throw validation_error("sink '" + net.ids[v] + "' has no incoming arc");
        } else {
            if (net.in_degree(v) == 0 || net.out_degree(v) == 0)
                throw validation_error("intermediary '" + net.ids[v] +
                                       "' must have incoming and outgoing arcs");
        }
    }

    topological_order(net);  // rejects cycles

    if (net.sources.size() > 1) {
        net.kind = NetworkKind::MultiSource;
    } else if (net.sinks.size() > 1) {
        net.kind = NetworkKind::MultiSink;
    } else {
        net.kind = is_series_parallel(net) ? NetworkKind::Spg : NetworkKind::GeneralDag;
    }
    return net;
}

namespace {

Rat json_rat(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer())
        return Rat(static_cast<long long>(j.get<long long>()));
    if (j.is_string()) {
        auto r = try_parse_rat(j.get<std::string>());
        if (r) return *r;
    }
    throw validation_error(where + ": expected an integer or a \"p/q\" string");
}

}  // namespace

Network parse_network(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed document: ") + e.what());
    }
    try {
        if (!doc.is_object()) throw validation_error("malformed document: not an object");

        std::vector<std::string> node_ids;
        for (const auto& n : doc.at("nodes")) node_ids.push_back(n.get<std::string>());

        std::vector<std::pair<std::string, std::string>> arc_ids;
        for (const auto& a : doc.at("arcs")) {
            if (!a.is_array() || a.size() != 2)
                throw validation_error("arcs: expected [seller, buyer] pairs");
            arc_ids.emplace_back(a[0].get<std::string>(), a[1].get<std::string>());
        }

        std::vector<std::pair<std::string, Rat>> sources;
        if (doc.contains("source")) {
            const auto& s = doc.at("source");
            sources.emplace_back(s.at("id").get<std::string>(), json_rat(s.at("cost"), "source cost"));
        }
        if (doc.contains("sources")) {
            for (const auto& s : doc.at("sources"))
                sources.emplace_back(s.at("id").get<std::string>(),
                                     json_rat(s.at("cost"), "source cost"));
        }

        std::vector<std::tuple<std::string, Rat, Rat>> sinks;
        if (doc.contains("sink")) {
            const auto& t = doc.at("sink");
            sinks.emplace_back(t.at("id").get<std::string>(),
                               json_rat(t.at("demand"), "sink demand"),
                               json_rat(t.at("slope"), "sink slope"));
        }
        if (doc.contains("sinks")) {
            for (const auto& t : doc.at("sinks"))
                sinks.emplace_back(t.at("id").get<std::string>(),
                                   json_rat(t.at("demand"), "sink demand"),
                                   json_rat(t.at("slope"), "sink slope"));
        }

        return make_network(std::move(node_ids), std::move(arc_ids), std::move(sources),
                            std::move(sinks));
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("malformed document: ") + e.what());
    }
}

std::string serialize_network(const Network& net) {
    nlohmann::json doc;
    doc["nodes"] = net.ids;
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& [u, v] : net.arcs)
        arcs.push_back(nlohmann::json::array({net.ids[u], net.ids[v]}));
    doc["arcs"] = arcs;
    if (net.sources.size() == 1) {
        doc["source"] = {{"id", net.ids[net.sources[0]]},
                         {"cost", rat_to_string(net.source_costs[0])}};
    } else {
        nlohmann::json ss = nlohmann::json::array();
        for (std::size_t i = 0; i < net.sources.size(); ++i)
            ss.push_back({{"id", net.ids[net.sources[i]]},
                          {"cost", rat_to_string(net.source_costs[i])}});
        doc["sources"] = ss;
    }
    if (net.sinks.size() == 1) {
        doc["sink"] = {{"id", net.ids[net.sinks[0]]},
                       {"demand", rat_to_string(net.sink_demands[0])},
                       {"slope", rat_to_string(net.sink_slopes[0])}};
    } else {
        nlohmann::json ts = nlohmann::json::array();
        for (std::size_t i = 0; i < net.sinks.size(); ++i)
            ts.push_back({{"id", net.ids[net.sinks[i]]},
                          {"demand", rat_to_string(net.sink_demands[i])},
                          {"slope", rat_to_string(net.sink_slopes[i])}});
        doc["sinks"] = ts;
    }
    return doc.dump(2) + "\n";
}

}  // namespace spchain
