#include <vector>

#include <gtest/gtest.h>

#include "netseir/netgen.hpp"
#include "netseir/simulate.hpp"

namespace netseir {
namespace {

ContactGraph star_graph(NodeId leaves) {
    ContactGraph g(leaves + 1);
    for (NodeId v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
}

TEST(RunEpidemic, CurveCoversEveryDayAndStartsAtInit) {
    ContactGraph g = gen_er(200, 0.03, 4);
    RunConfig config;
    config.disease = DiseaseParams{0.05, 0.2, 1.0 / 14.0};
    config.init = CompartmentCounts{196, 3, 1, 0};
    config.days = 30;
    config.seed = 11;
    auto curve = run_epidemic(g, config);
    ASSERT_EQ(curve.size(), 31u);
    EXPECT_EQ(curve[0], config.init);
    for (const CompartmentCounts& day : curve) EXPECT_EQ(day.total(), 200u);
}

TEST(RunEpidemic, ZeroTransmissionDrainsThroughCompartments) {
    // phi = 0 freezes S; sigma = gamma = 1 pushes E -> I -> R in lockstep.
    ContactGraph g(100);
    RunConfig config;
    config.disease = DiseaseParams{0.0, 1.0, 1.0};
    config.init = CompartmentCounts{90, 5, 5, 0};
    config.days = 3;
    config.seed = 2;
    auto curve = run_epidemic(g, config);
    EXPECT_EQ(curve[1], (CompartmentCounts{90, 0, 5, 5}));
    EXPECT_EQ(curve[2], (CompartmentCounts{90, 0, 0, 10}));
    EXPECT_EQ(curve[3], (CompartmentCounts{90, 0, 0, 10}));
}

TEST(RunEpidemic, DayZeroInterventionPrecedesTheFirstStep) {
    // On a star every exposure routes through the hub. Removing it on day 0
    // must block even the first step's contacts.
    ContactGraph g = star_graph(50);
    RunConfig config;
    config.disease = DiseaseParams{1.0, 1.0, 0.0};
    config.init = CompartmentCounts{50, 0, 1, 0};
    config.days = 5;
    config.seed = 3;

    auto control = run_epidemic(g, config);
    EXPECT_EQ(control[3].s, 0u);  // worst case: leaf -> hub -> all leaves

    config.npis.events.push_back({0, NpiKind::RemoveHubs, 1, 0, 0.02, 1.0, "h", "", std::nullopt});
    auto protectd = run_epidemic(g, config);
    for (const CompartmentCounts& day : protectd) EXPECT_EQ(day.s, 50u);
}

TEST(RunEpidemic, LeavesTheInputGraphUntouched) {
    ContactGraph g = gen_ba(300, 3, 5);
    std::size_t edges = g.edge_count();
    RunConfig config;
    config.disease = DiseaseParams{0.1, 0.2, 0.1};
    config.init = CompartmentCounts{296, 3, 1, 0};
    config.npis.events.push_back({0, NpiKind::RemoveHubs, 1, 0, 0.1, 1.0, "h", "", std::nullopt});
    config.npis.events.push_back({2, NpiKind::SocialDistancing, 1, 0.5, 0, 1, "sd", "", std::nullopt});
    config.days = 10;
    config.seed = 4;
    run_epidemic(g, config);
    EXPECT_EQ(g.edge_count(), edges);
    EXPECT_TRUE(g.removal_ledger().empty());
}

TEST(RunEpidemic, DeterministicForAFixedSeed) {
    ContactGraph g = gen_er(300, 0.02, 6);
    RunConfig config;
    config.disease = DiseaseParams{0.05, 0.2, 0.07};
    config.init = CompartmentCounts{296, 3, 1, 0};
    config.noncompliance = 0.26;
    config.days = 40;
    config.seed = 7;
    EXPECT_EQ(run_epidemic(g, config), run_epidemic(g, config));
}

TEST(RunEpidemic, RejectsNegativeDays) {
    ContactGraph g(10);
    RunConfig config;
    config.init = CompartmentCounts{9, 0, 1, 0};
    config.days = -1;
    EXPECT_THROW(run_epidemic(g, config), std::invalid_argument);
}

TEST(RunReplicates, PrefixStableUnderMoreReplicates) {
    ContactGraph g = gen_er(200, 0.03, 8);
    RunConfig config;
    config.disease = DiseaseParams{0.05, 0.2, 0.07};
    config.init = CompartmentCounts{196, 3, 1, 0};
    config.days = 25;
    config.seed = 9;
    auto three = run_replicates(g, config, 3);
    auto five = run_replicates(g, config, 5);
    ASSERT_EQ(three.size(), 3u);
    ASSERT_EQ(five.size(), 5u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(five[i], three[i]);
}

TEST(RunReplicates, WorkerCountDoesNotChangeResults) {
    ContactGraph g = gen_er(200, 0.03, 8);
    RunConfig config;
    config.disease = DiseaseParams{0.05, 0.2, 0.07};
    config.init = CompartmentCounts{196, 3, 1, 0};
    config.days = 25;
    config.seed = 10;
    EXPECT_EQ(run_replicates(g, config, 4, 1), run_replicates(g, config, 4, 2));
}

TEST(RunReplicates, ReplicatesActuallyDiffer) {
    ContactGraph g = gen_er(200, 0.03, 8);
    RunConfig config;
    config.disease = DiseaseParams{0.05, 0.2, 0.07};
    config.init = CompartmentCounts{196, 3, 1, 0};
    config.days = 25;
    config.seed = 11;
    auto curves = run_replicates(g, config, 5);
    int distinct_pairs = 0;
    for (std::size_t a = 0; a < curves.size(); ++a) {
        for (std::size_t b = a + 1; b < curves.size(); ++b) {
            if (curves[a] != curves[b]) ++distinct_pairs;
        }
    }
    EXPECT_EQ(distinct_pairs, 10);
}

TEST(RunReplicates, RejectsNonPositiveCount) {
    ContactGraph g(10);
    RunConfig config;
    config.init = CompartmentCounts{9, 0, 1, 0};
    config.days = 1;
    EXPECT_THROW(run_replicates(g, config, 0), std::invalid_argument);
}

}  // namespace
}  // namespace netseir
