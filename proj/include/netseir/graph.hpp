#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netseir/rng.hpp"

namespace netseir {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Opaque label naming the intervention event that removed a set of edges.
// Must be unique per application event; removals under the same tag
// accumulate (e.g. a quarantine policy adding edges day by day).
using RemovalTag = std::string;

inline Edge canonical_edge(NodeId u, NodeId v) {
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Mutable undirected contact graph. Every edge lives in exactly one place:
// either the active adjacency or a single ledger entry keyed by the
// RemovalTag that removed it. restore_edges(tag) puts the ledgered edges
// back, so any sequence of removals can be reversed exactly.
//
// Neighbor lists are kept sorted by NodeId, which fixes the iteration
// order every consumer (simulation, interventions) relies on for
// reproducible runs.
class ContactGraph {
public:
    ContactGraph() = default;

    explicit ContactGraph(NodeId node_count) : adjacency_(node_count) {}

    NodeId node_count() const { return static_cast<NodeId>(adjacency_.size()); }

    std::size_t edge_count() const { return edge_count_; }

    std::uint32_t degree(NodeId u) const {
        check_node(u);
        return static_cast<std::uint32_t>(adjacency_[u].size());
    }

    std::span<const NodeId> neighbors(NodeId u) const {
        check_node(u);
        return adjacency_[u];
    }

    bool has_edge(NodeId u, NodeId v) const {
        check_node(u);
        check_node(v);
        const auto& list = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
        NodeId other = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
        return std::binary_search(list.begin(), list.end(), other);
    }

    // Inserts (u, v); a no-op if the edge already exists. Self-loops are
    // rejected.
    void add_edge(NodeId u, NodeId v) {
        check_node(u);
        check_node(v);
        if (u == v) throw std::invalid_argument("add_edge: self-loop (" + std::to_string(u) + ")");
        if (insert_half(u, v)) {
            insert_half(v, u);
            ++edge_count_;
        }
    }

    // Removes the listed edges and records them under `tag`. All edges must
    // be currently active; a non-active edge (absent, already ledgered, or
    // listed twice) signals a double-applied intervention and is an error.
    // Validation happens before any mutation.
    void remove_edges(std::span<const Edge> edges, const RemovalTag& tag) {
        std::vector<Edge> canon;
        canon.reserve(edges.size());
        for (const auto& [u, v] : edges) canon.push_back(canonical_edge(u, v));
        {
            std::vector<Edge> sorted = canon;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw std::invalid_argument("remove_edges: duplicate edge in request");
            }
        }
        for (const auto& [u, v] : canon) {
            if (!has_edge(u, v)) {
                throw std::invalid_argument("remove_edges: edge (" + std::to_string(u) + "," +
                                            std::to_string(v) + ") is not active (tag '" + tag + "')");
            }
        }
        auto& entry = ledger_[tag];
        for (const auto& [u, v] : canon) {
            erase_half(u, v);
            erase_half(v, u);
            --edge_count_;
            entry.push_back({u, v});
        }
    }

    // Removes every active edge incident to `u` under `tag`.
    void remove_all_edges_of(NodeId u, const RemovalTag& tag) {
        check_node(u);
        std::vector<Edge> edges;
        edges.reserve(adjacency_[u].size());
        for (NodeId v : adjacency_[u]) edges.push_back(canonical_edge(u, v));
        if (!edges.empty()) remove_edges(edges, tag);
    }

    // Re-adds every edge ledgered under `tag` and drops the ledger entry,
    // returning the edge set to its pre-removal value for those edges.
    void restore_edges(const RemovalTag& tag) {
        auto it = ledger_.find(tag);
        if (it == ledger_.end()) throw std::out_of_range("restore_edges: unknown tag '" + tag + "'");
        for (const auto& [u, v] : it->second) {
            if (has_edge(u, v)) {
                throw std::logic_error("restore_edges: ledgered edge (" + std::to_string(u) + "," +
                                       std::to_string(v) + ") is already active");
            }
            insert_half(u, v);
            insert_half(v, u);
            ++edge_count_;
        }
        ledger_.erase(it);
    }

    bool has_removal_tag(const RemovalTag& tag) const { return ledger_.count(tag) != 0; }

    const std::map<RemovalTag, std::vector<Edge>>& removal_ledger() const { return ledger_; }

    std::size_t ledgered_edge_count() const {
        std::size_t total = 0;
        for (const auto& [tag, edges] : ledger_) total += edges.size();
        return total;
    }

    // All active edges as sorted canonical pairs.
    std::vector<Edge> active_edges() const {
        std::vector<Edge> edges;
        edges.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u) {
            for (NodeId v : adjacency_[u]) {
                if (u < v) edges.push_back({u, v});
            }
        }
        return edges;
    }

    // Probability that a contact along an active edge actually occurs in a
    // simulation step; below 1 only for pre-aggregated networks whose edges
    // overstate daily contact.
    double contact_sampling_rate() const { return contact_sampling_rate_; }

    void set_contact_sampling_rate(double rate) {
        if (!(rate > 0.0) || rate > 1.0) {
            throw std::invalid_argument("contact_sampling_rate must be in (0, 1]");
        }
        contact_sampling_rate_ = rate;
    }

    // Induced subgraph on the largest connected component, nodes re-indexed
    // densely in ascending original-id order. Ties between equal-sized
    // components go to the one containing the smallest original id.
    // `original_ids`, when given, receives the new-index -> original-id map.
    ContactGraph giant_component(std::vector<NodeId>* original_ids = nullptr) const {
        if (node_count() == 0) throw std::invalid_argument("giant_component: empty graph");
        std::vector<std::int32_t> component(node_count(), -1);
        std::int32_t component_count = 0;
        std::size_t best_size = 0;
        std::int32_t best_component = -1;
        std::vector<NodeId> frontier;
        for (NodeId start = 0; start < node_count(); ++start) {
            if (component[start] != -1) continue;
            std::int32_t id = component_count++;
            std::size_t size = 0;
            frontier.clear();
            frontier.push_back(start);
            component[start] = id;
            while (!frontier.empty()) {
                NodeId u = frontier.back();
                frontier.pop_back();
                ++size;
                for (NodeId v : adjacency_[u]) {
                    if (component[v] == -1) {
                        component[v] = id;
                        frontier.push_back(v);
                    }
                }
            }
            // Strictly-greater keeps the first (smallest-min-id) component on ties:
            // components are discovered in ascending order of their minimum id.
            if (size > best_size) {
                best_size = size;
                best_component = id;
            }
        }

        std::vector<NodeId> members;
        members.reserve(best_size);
        std::vector<NodeId> new_index(node_count());
        for (NodeId u = 0; u < node_count(); ++u) {
            if (component[u] == best_component) {
                new_index[u] = static_cast<NodeId>(members.size());
                members.push_back(u);
            }
        }
        ContactGraph sub(static_cast<NodeId>(members.size()));
        sub.contact_sampling_rate_ = contact_sampling_rate_;
        for (NodeId u : members) {
            for (NodeId v : adjacency_[u]) {
                if (u < v) sub.add_edge(new_index[u], new_index[v]);
            }
        }
        if (original_ids) *original_ids = std::move(members);
        return sub;
    }

    // The ceil(fraction * n) highest-degree nodes, ordered by
    // (degree desc, id asc). Ties always break toward the smaller id.
    std::vector<NodeId> top_degree_nodes(double fraction) const {
        if (!(fraction > 0.0) || fraction > 1.0) {
            throw std::invalid_argument("top_degree_nodes: fraction must be in (0, 1]");
        }
        // The epsilon guards against binary representation pushing an exact
        // product like 0.05 * 100 just above its integer value.
        auto count = static_cast<std::size_t>(std::ceil(fraction * node_count() - 1e-9));
        count = std::min<std::size_t>(std::max<std::size_t>(count, 1), node_count());
        std::vector<NodeId> nodes(node_count());
        for (NodeId u = 0; u < node_count(); ++u) nodes[u] = u;
        std::sort(nodes.begin(), nodes.end(), [this](NodeId a, NodeId b) {
            if (adjacency_[a].size() != adjacency_[b].size()) {
                return adjacency_[a].size() > adjacency_[b].size();
            }
            return a < b;
        });
        nodes.resize(count);
        return nodes;
    }

private:
    void check_node(NodeId u) const {
        if (u >= adjacency_.size()) {
            throw std::out_of_range("node " + std::to_string(u) + " out of range (n=" +
                                    std::to_string(adjacency_.size()) + ")");
        }
    }

    // Returns false if v was already present in u's list.
    bool insert_half(NodeId u, NodeId v) {
        auto& list = adjacency_[u];
        auto it = std::lower_bound(list.begin(), list.end(), v);
        if (it != list.end() && *it == v) return false;
        list.insert(it, v);
        return true;
    }

    void erase_half(NodeId u, NodeId v) {
        auto& list = adjacency_[u];
        auto it = std::lower_bound(list.begin(), list.end(), v);
        list.erase(it);
    }

    std::vector<std::vector<NodeId>> adjacency_;
    std::map<RemovalTag, std::vector<Edge>> ledger_;
    std::size_t edge_count_ = 0;
    double contact_sampling_rate_ = 1.0;
};

// Mean BFS distance over sampled source nodes (all nodes when the sample
// covers the graph). Unreachable pairs are excluded, so on a connected
// graph this estimates the average shortest path length.
inline double estimate_average_shortest_path(const ContactGraph& g, std::size_t sample_sources,
                                             std::uint64_t seed) {
    if (g.node_count() == 0) throw std::invalid_argument("average shortest path: empty graph");
    std::vector<NodeId> sources(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) sources[u] = u;
    std::size_t take = std::min<std::size_t>(sample_sources, sources.size());
    if (take < sources.size()) {
        Rng rng(seed);
        rng.partial_shuffle(sources, take);
        sources.resize(take);
    }

    std::vector<std::int32_t> dist(g.node_count());
    std::vector<NodeId> queue(g.node_count());
    double total = 0.0;
    std::uint64_t pairs = 0;
    for (NodeId source : sources) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        dist[source] = 0;
        queue[tail++] = source;
        while (head < tail) {
            NodeId u = queue[head++];
            for (NodeId v : g.neighbors(u)) {
                if (dist[v] == -1) {
                    dist[v] = dist[u] + 1;
                    queue[tail++] = v;
                    total += dist[v];
                    ++pairs;
                }
            }
        }
    }
    if (pairs == 0) return 0.0;
    return total / static_cast<double>(pairs);
}

}  // namespace netseir
