#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/graph.hpp"
#include "netseir/rng.hpp"

namespace netseir {

enum class GraphFamily { Regular, ErdosRenyi, BarabasiAlbert };

inline std::string family_name(GraphFamily family) {
    switch (family) {
        case GraphFamily::Regular: return "regular";
        case GraphFamily::ErdosRenyi: return "er";
        case GraphFamily::BarabasiAlbert: return "ba";
    }
    throw std::logic_error("unknown graph family");
}

inline GraphFamily parse_family(const std::string& name) {
    if (name == "regular") return GraphFamily::Regular;
    if (name == "er") return GraphFamily::ErdosRenyi;
    if (name == "ba") return GraphFamily::BarabasiAlbert;
    throw std::invalid_argument("unknown graph family '" + name + "' (expected regular|er|ba)");
}

// Random graph with every node at exactly degree k, via stub pairing:
// shuffle the stub multiset, pair consecutive stubs, push colliding pairs
// (self-loop or existing edge) back for the next pass. A full regeneration
// happens only when a pass makes no progress, which is rare for k << n.
inline ContactGraph gen_regular(NodeId n, std::uint32_t k, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_regular: need n >= 2");
    if (k >= n) throw std::invalid_argument("gen_regular: need k < n");
    if ((static_cast<std::uint64_t>(n) * k) % 2 != 0) {
        throw std::invalid_argument("gen_regular: n*k must be even");
    }
    Rng rng(seed);
    if (k == 0) return ContactGraph(n);

    constexpr int max_attempts = 200;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        ContactGraph g(n);
        std::vector<NodeId> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * k);
        for (NodeId u = 0; u < n; ++u) {
            for (std::uint32_t j = 0; j < k; ++j) stubs.push_back(u);
        }
        bool stuck = false;
        while (!stubs.empty()) {
            rng.shuffle(stubs);
            std::vector<NodeId> retry;
            bool progress = false;
            for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
                NodeId u = stubs[i];
                NodeId v = stubs[i + 1];
                if (u == v || g.has_edge(u, v)) {
                    retry.push_back(u);
                    retry.push_back(v);
                } else {
                    g.add_edge(u, v);
                    progress = true;
                }
            }
            if (!progress && !retry.empty()) {
                stuck = true;
                break;
            }
            stubs = std::move(retry);
        }
        if (!stuck) return g;
    }
    throw std::runtime_error("gen_regular: no simple pairing found after " +
                             std::to_string(max_attempts) + " attempts");
}

// G(n, p): every pair is an edge independently with probability p. Sampled
// by geometric skips over the pair sequence rather than n(n-1)/2 separate
// Bernoulli draws; the resulting distribution is identical.
inline ContactGraph gen_er(NodeId n, double p, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("gen_er: need n >= 2");
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("gen_er: p must be in [0, 1]");
    ContactGraph g(n);
    if (p == 0.0) return g;
    if (p == 1.0) {
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
        }
        return g;
    }
    Rng rng(seed);
    const double log_q = std::log1p(-p);
    // Pairs (v, w) with w < v, enumerated row by row.
    std::uint64_t v = 1;
    std::int64_t w = -1;
    while (v < n) {
        double r = rng.next_double();
        w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
        while (w >= static_cast<std::int64_t>(v) && v < n) {
            w -= static_cast<std::int64_t>(v);
            ++v;
        }
        if (v < n) g.add_edge(static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
    return g;
}

// Preferential attachment from a seed clique on m nodes; each arriving
// node draws m distinct targets proportional to current degree. Final edge
// count is exactly C(m,2) + (n-m)*m.
inline ContactGraph gen_ba(NodeId n, std::uint32_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("gen_ba: need m >= 1");
    if (m >= n) throw std::invalid_argument("gen_ba: need m < n");
    Rng rng(seed);
    ContactGraph g(n);
    // One entry per unit of degree; sampling an entry uniformly is
    // degree-proportional sampling.
    std::vector<NodeId> degree_pool;
    degree_pool.reserve(2 * (static_cast<std::size_t>(m) * (m - 1) / 2 +
                             static_cast<std::size_t>(n - m) * m));
    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            g.add_edge(u, v);
            degree_pool.push_back(u);
            degree_pool.push_back(v);
        }
    }
    std::vector<NodeId> chosen;
    chosen.reserve(m);
    for (NodeId t = m; t < n; ++t) {
        chosen.clear();
        while (chosen.size() < m) {
            // An empty pool means no edges exist yet (m = 1, first
            // arrival); fall back to a uniform pick over existing nodes.
            NodeId candidate =
                degree_pool.empty()
                    ? rng.below(t)
                    : degree_pool[rng.below(static_cast<std::uint32_t>(degree_pool.size()))];
            if (std::find(chosen.begin(), chosen.end(), candidate) == chosen.end()) {
                chosen.push_back(candidate);
            }
        }
        for (NodeId c : chosen) {
            g.add_edge(t, c);
            degree_pool.push_back(c);
            degree_pool.push_back(t);
        }
    }
    return g;
}

struct GenSpec {
    GraphFamily family = GraphFamily::ErdosRenyi;
    NodeId n = 0;
    std::uint32_t degree = 0;        // Regular
    double edge_prob = 0.0;          // Erdos-Renyi
    std::uint32_t edges_per_node = 0;  // Barabasi-Albert
    std::uint64_t seed = 0;
};

inline ContactGraph generate(const GenSpec& spec) {
    switch (spec.family) {
        case GraphFamily::Regular: return gen_regular(spec.n, spec.degree, spec.seed);
        case GraphFamily::ErdosRenyi: return gen_er(spec.n, spec.edge_prob, spec.seed);
        case GraphFamily::BarabasiAlbert: return gen_ba(spec.n, spec.edges_per_node, spec.seed);
    }
    throw std::logic_error("unknown graph family");
}

}  // namespace netseir
