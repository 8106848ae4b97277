#pragma once

#include "spchain/errors.hpp"
#include "spchain/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace spchain {

enum class NetworkKind { Spg, GeneralDag, MultiSink, MultiSource };

const char* kind_name(NetworkKind k);

// An annotated trade network. Nodes are indexed 0..n-1 in lexicographic id
// order, so index-ordered iteration is reproducible across runs. Immutable
// after construction.
struct Network {
    std::vector<std::string> ids;              // index -> id
    std::vector<std::pair<int, int>> arcs;     // (seller, buyer), sorted
    std::vector<std::vector<int>> out_arcs;    // node -> arc indices
    std::vector<std::vector<int>> in_arcs;     // node -> arc indices

    std::vector<int> sources;                  // node indices
    std::vector<Rat> source_costs;             // a at each source
    std::vector<int> sinks;
    std::vector<Rat> sink_demands;             // a at each sink
    std::vector<Rat> sink_slopes;              // b at each sink

    NetworkKind kind = NetworkKind::Spg;

    int node_count() const { return static_cast<int>(ids.size()); }
    int arc_count() const { return static_cast<int>(arcs.size()); }

    // Single-terminal accessors; throw if the network is a multi-terminal kind.
    int source() const;
    int sink() const;
    const Rat& source_cost() const;
    const Rat& sink_demand() const;
    const Rat& sink_slope() const;

    bool is_source(int v) const;
    bool is_sink(int v) const;

    int index_of(const std::string& id) const;      // throws validation_error
    int find_node(const std::string& id) const;     // -1 when absent
    int arc_between(int seller, int buyer) const;   // arc index or -1
    int out_degree(int v) const { return static_cast<int>(out_arcs[v].size()); }
    int in_degree(int v) const { return static_cast<int>(in_arcs[v].size()); }

    bool operator==(const Network&) const = default;
};

// Builds and validates a network from already-resolved pieces. Used by the
// parser, the generator, and the rewrite operations.
Network make_network(std::vector<std::string> node_ids,
                     std::vector<std::pair<std::string, std::string>> arc_ids,
                     std::vector<std::pair<std::string, Rat>> sources,
                     std::vector<std::tuple<std::string, Rat, Rat>> sinks);

// Parses the JSON network document. Every rational literal is parsed exactly.
Network parse_network(const std::string& text);

// Canonical document for round-tripping; parse_network(serialize_network(n)) == n.
std::string serialize_network(const Network& net);

// The shared demand intercept: a_t for a single sink, the common demand when
// every sink agrees. Throws validation_error on mixed demands.
const Rat& uniform_demand(const Network& net);
bool has_uniform_demand(const Network& net);

// Topological order of node indices, ties broken by node index (= id order).
// reversed_ties flips the tie-break, for order-independence tests.
std::vector<int> topological_order(const Network& net, bool reversed_ties = false);

// True when `to` is reachable from `from` by a directed path (possibly empty).
bool reaches(const Network& net, int from, int to);

}  // namespace spchain
