#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "netseir/graph.hpp"
#include "netseir/netgen.hpp"

namespace netseir {
namespace {

ContactGraph path_graph(NodeId n) {
    ContactGraph g(n);
    for (NodeId u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
    return g;
}

// Independent component finder used as an oracle for giant_component.
std::vector<std::vector<NodeId>> components_by_bfs(const ContactGraph& g) {
    std::vector<std::vector<NodeId>> components;
    std::vector<bool> seen(g.node_count(), false);
    for (NodeId start = 0; start < g.node_count(); ++start) {
        if (seen[start]) continue;
        std::vector<NodeId> members;
        std::queue<NodeId> frontier;
        frontier.push(start);
        seen[start] = true;
        while (!frontier.empty()) {
            NodeId u = frontier.front();
            frontier.pop();
            members.push_back(u);
            for (NodeId v : g.neighbors(u)) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push(v);
                }
            }
        }
        components.push_back(std::move(members));
    }
    return components;
}

TEST(ContactGraph, AddEdgeBasics) {
    ContactGraph g(4);
    EXPECT_EQ(g.node_count(), 4u);
    EXPECT_EQ(g.edge_count(), 0u);
    g.add_edge(0, 1);
    g.add_edge(2, 1);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_FALSE(g.has_edge(0, 2));
    EXPECT_EQ(g.degree(1), 2u);
    EXPECT_EQ(g.degree(3), 0u);
}

TEST(ContactGraph, AddEdgeDuplicateIsNoOp) {
    ContactGraph g(3);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.degree(0), 1u);
}

TEST(ContactGraph, AddEdgeRejectsSelfLoopAndBadNode) {
    ContactGraph g(3);
    EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
    EXPECT_THROW(g.add_edge(0, 3), std::out_of_range);
    EXPECT_THROW(g.degree(5), std::out_of_range);
}

TEST(ContactGraph, NeighborsAreSortedAscending) {
    ContactGraph g(6);
    g.add_edge(3, 5);
    g.add_edge(3, 0);
    g.add_edge(3, 4);
    g.add_edge(3, 1);
    auto nb = g.neighbors(3);
    std::vector<NodeId> got(nb.begin(), nb.end());
    EXPECT_EQ(got, (std::vector<NodeId>{0, 1, 4, 5}));
}

TEST(ContactGraph, ActiveEdgesSortedCanonical) {
    ContactGraph g(4);
    g.add_edge(3, 2);
    g.add_edge(1, 0);
    g.add_edge(0, 3);
    EXPECT_EQ(g.active_edges(), (std::vector<Edge>{{0, 1}, {0, 3}, {2, 3}}));
}

TEST(ContactGraph, RemoveAndRestoreRoundTrip) {
    ContactGraph g(5);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    auto before = g.active_edges();

    std::vector<Edge> removed{{1, 0}, {2, 3}};
    g.remove_edges(removed, "event");
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_FALSE(g.has_edge(0, 1));
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.has_removal_tag("event"));
    EXPECT_EQ(g.ledgered_edge_count(), 2u);

    g.restore_edges("event");
    EXPECT_EQ(g.active_edges(), before);
    EXPECT_FALSE(g.has_removal_tag("event"));
    EXPECT_EQ(g.ledgered_edge_count(), 0u);
}

TEST(ContactGraph, RemovalsUnderOneTagAccumulate) {
    ContactGraph g = path_graph(4);
    g.remove_edges(std::vector<Edge>{{0, 1}}, "sweep");
    g.remove_edges(std::vector<Edge>{{1, 2}}, "sweep");
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.ledgered_edge_count(), 2u);
    g.restore_edges("sweep");
    EXPECT_EQ(g.edge_count(), 3u);
}

TEST(ContactGraph, RemoveEdgesValidatesBeforeMutating) {
    ContactGraph g = path_graph(4);
    // Second edge is absent, so the whole request must be rejected and the
    // first edge left untouched.
    std::vector<Edge> bad{{0, 1}, {0, 3}};
    EXPECT_THROW(g.remove_edges(bad, "t"), std::invalid_argument);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_FALSE(g.has_removal_tag("t"));

    std::vector<Edge> dup{{0, 1}, {1, 0}};
    EXPECT_THROW(g.remove_edges(dup, "t"), std::invalid_argument);
    EXPECT_TRUE(g.has_edge(0, 1));
}

TEST(ContactGraph, RemoveAlreadyLedgeredEdgeFails) {
    ContactGraph g = path_graph(3);
    g.remove_edges(std::vector<Edge>{{0, 1}}, "a");
    EXPECT_THROW(g.remove_edges(std::vector<Edge>{{0, 1}}, "b"), std::invalid_argument);
}

TEST(ContactGraph, RestoreUnknownTagFails) {
    ContactGraph g = path_graph(3);
    EXPECT_THROW(g.restore_edges("nope"), std::out_of_range);
}

TEST(ContactGraph, RestoreCollidingWithActiveEdgeFails) {
    ContactGraph g = path_graph(3);
    g.remove_edges(std::vector<Edge>{{0, 1}}, "a");
    g.add_edge(0, 1);  // re-added out of band
    EXPECT_THROW(g.restore_edges("a"), std::logic_error);
}

TEST(ContactGraph, RemoveAllEdgesOfNode) {
    ContactGraph g(5);
    g.add_edge(2, 0);
    g.add_edge(2, 1);
    g.add_edge(2, 3);
    g.add_edge(0, 4);
    g.remove_all_edges_of(2, "hub");
    EXPECT_EQ(g.degree(2), 0u);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.has_edge(0, 4));
    g.restore_edges("hub");
    EXPECT_EQ(g.degree(2), 3u);
}

TEST(ContactGraph, RemoveAllEdgesOfIsolatedNodeLeavesNoLedgerEntry) {
    ContactGraph g(3);
    g.remove_all_edges_of(1, "hub");
    EXPECT_FALSE(g.has_removal_tag("hub"));
}

TEST(ContactGraph, GiantComponentMatchesBfsOracle) {
    // Components: {0,1,2} with 3 edges, {3,4} with 1, {5} isolated, {6,7} with 1.
    ContactGraph g(8);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(0, 2);
    g.add_edge(3, 4);
    g.add_edge(6, 7);

    auto oracle = components_by_bfs(g);
    std::vector<NodeId> largest;
    for (auto& component : oracle) {
        if (component.size() > largest.size()) largest = component;
    }
    std::sort(largest.begin(), largest.end());

    std::vector<NodeId> original;
    ContactGraph sub = g.giant_component(&original);
    EXPECT_EQ(original, largest);
    EXPECT_EQ(sub.node_count(), 3u);
    EXPECT_EQ(sub.edge_count(), 3u);
    EXPECT_TRUE(sub.has_edge(0, 1));
    EXPECT_TRUE(sub.has_edge(1, 2));
    EXPECT_TRUE(sub.has_edge(0, 2));
}

TEST(ContactGraph, GiantComponentTieBreaksTowardSmallestId) {
    // Two components of size 2; the one containing node 0 must win.
    ContactGraph g(4);
    g.add_edge(2, 3);
    g.add_edge(0, 1);
    std::vector<NodeId> original;
    ContactGraph sub = g.giant_component(&original);
    EXPECT_EQ(original, (std::vector<NodeId>{0, 1}));
    EXPECT_EQ(sub.node_count(), 2u);
}

TEST(ContactGraph, GiantComponentOnRandomGraphsAgainstOracle) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        ContactGraph g = gen_er(60, 0.02, seed);  // sparse: several components
        std::size_t best = 0;
        for (auto& component : components_by_bfs(g)) best = std::max(best, component.size());
        std::vector<NodeId> original;
        ContactGraph sub = g.giant_component(&original);
        EXPECT_EQ(sub.node_count(), best);
        // Degree preservation under re-indexing.
        for (NodeId u = 0; u < sub.node_count(); ++u) {
            EXPECT_EQ(sub.degree(u), g.degree(original[u]));
        }
    }
}

TEST(ContactGraph, GiantComponentKeepsSamplingRate) {
    ContactGraph g(3);
    g.add_edge(0, 1);
    g.set_contact_sampling_rate(0.25);
    EXPECT_DOUBLE_EQ(g.giant_component().contact_sampling_rate(), 0.25);
}

TEST(ContactGraph, TopDegreeNodesMatchesBruteForce) {
    ContactGraph g(10);
    // Degrees: 0:3 1:2 2:4 3:1 4:0 5:3 6:2 7:1 8:2 9:2
    g.add_edge(2, 0);
    g.add_edge(2, 1);
    g.add_edge(2, 5);
    g.add_edge(2, 6);
    g.add_edge(0, 5);
    g.add_edge(0, 8);
    g.add_edge(5, 9);
    g.add_edge(1, 3);
    g.add_edge(6, 7);
    g.add_edge(8, 9);

    std::vector<NodeId> order(10);
    for (NodeId u = 0; u < 10; ++u) order[u] = u;
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });

    for (std::size_t count = 1; count <= 10; ++count) {
        double fraction = static_cast<double>(count) / 10.0;
        std::vector<NodeId> expected(order.begin(), order.begin() + count);
        EXPECT_EQ(g.top_degree_nodes(fraction), expected) << "fraction " << fraction;
    }
}

TEST(ContactGraph, TopDegreeNodesExactFractionBoundary) {
    // 0.05 * 100 is 5 but sits just above 5 in binary; ceil must not bump
    // the hub count to 6.
    ContactGraph g = gen_ba(100, 2, 9);
    EXPECT_EQ(g.top_degree_nodes(0.05).size(), 5u);
    EXPECT_EQ(g.top_degree_nodes(0.10).size(), 10u);
    EXPECT_EQ(g.top_degree_nodes(1.0).size(), 100u);
    // Non-integer products still round up.
    EXPECT_EQ(g.top_degree_nodes(0.051).size(), 6u);
    EXPECT_EQ(g.top_degree_nodes(0.001).size(), 1u);
}

TEST(ContactGraph, TopDegreeNodesRejectsBadFraction) {
    ContactGraph g(3);
    EXPECT_THROW(g.top_degree_nodes(0.0), std::invalid_argument);
    EXPECT_THROW(g.top_degree_nodes(-0.1), std::invalid_argument);
    EXPECT_THROW(g.top_degree_nodes(1.1), std::invalid_argument);
}

TEST(ContactGraph, ContactSamplingRateValidation) {
    ContactGraph g(2);
    g.set_contact_sampling_rate(1.0);
    g.set_contact_sampling_rate(0.001);
    EXPECT_THROW(g.set_contact_sampling_rate(0.0), std::invalid_argument);
    EXPECT_THROW(g.set_contact_sampling_rate(-0.5), std::invalid_argument);
    EXPECT_THROW(g.set_contact_sampling_rate(1.5), std::invalid_argument);
}

TEST(AverageShortestPath, PathGraphExact) {
    // Path on 4 nodes: per-source distance sums are 6, 4, 4, 6, so the mean
    // over the 12 ordered pairs is 20/12.
    ContactGraph g = path_graph(4);
    EXPECT_NEAR(estimate_average_shortest_path(g, 4, 0), 20.0 / 12.0, 1e-12);
}

TEST(AverageShortestPath, CompleteGraphIsOne) {
    ContactGraph g = gen_er(20, 1.0, 0);
    EXPECT_NEAR(estimate_average_shortest_path(g, 20, 0), 1.0, 1e-12);
}

TEST(AverageShortestPath, SampledEstimateNearExhaustive) {
    ContactGraph g = gen_er(400, 0.03, 3);
    double full = estimate_average_shortest_path(g, 400, 0);
    double sampled = estimate_average_shortest_path(g, 80, 7);
    EXPECT_NEAR(sampled, full, 0.15 * full);
}

}  // namespace
}  // namespace netseir
