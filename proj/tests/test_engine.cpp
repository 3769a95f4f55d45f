#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "netseir/engine.hpp"
#include "netseir/netgen.hpp"
#include "netseir/rng.hpp"

namespace netseir {
namespace {

// Star on 1 + leaves nodes with node 0 the center.
ContactGraph star_graph(NodeId leaves) {
    ContactGraph g(leaves + 1);
    for (NodeId v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
}

// State with hand-placed compartments and no randomness consumed yet.
EpidemicState manual_state(const ContactGraph& g, const std::vector<Compartment>& compartments,
                           std::uint64_t seed, MaskParams masks = {}) {
    EpidemicState state;
    state.rng = Rng(seed);
    state.masks = masks;
    state.compartments = compartments;
    state.complier.assign(g.node_count(), 1);
    state.wears_mask.assign(g.node_count(), 0);
    state.quarantined.assign(g.node_count(), 0);
    state.counts = state.recount();
    return state;
}

TEST(DiseaseParams, Validation) {
    DiseaseParams ok{0.5, 0.2, 0.1};
    EXPECT_NO_THROW(ok.validate());
    EXPECT_THROW((DiseaseParams{-0.1, 0.2, 0.1}).validate(), std::invalid_argument);
    EXPECT_THROW((DiseaseParams{0.5, 1.2, 0.1}).validate(), std::invalid_argument);
    EXPECT_THROW((DiseaseParams{0.5, 0.2, -1}).validate(), std::invalid_argument);
}

TEST(MaskParams, Validation) {
    MaskParams defaults;
    EXPECT_NO_THROW(defaults.validate());
    EXPECT_DOUBLE_EQ(defaults.both_masked, 0.6);
    EXPECT_DOUBLE_EQ(defaults.one_masked, 0.8);
    EXPECT_DOUBLE_EQ(defaults.no_mask, 1.0);
    EXPECT_DOUBLE_EQ(defaults.coverage, 1.0);
    MaskParams amplifying{1.0, 1.2, 1.5, 1.0};  // multipliers above 1 are allowed
    EXPECT_NO_THROW(amplifying.validate());
    MaskParams negative{-0.1, 0.8, 1.0, 1.0};
    EXPECT_THROW(negative.validate(), std::invalid_argument);
    MaskParams coverage{0.6, 0.8, 1.0, 1.5};
    EXPECT_THROW(coverage.validate(), std::invalid_argument);
}

TEST(InitState, ExactCountsAndFlags) {
    ContactGraph g = gen_er(200, 0.05, 1);
    EpidemicState state = init_state(g, CompartmentCounts{190, 6, 3, 1}, MaskParams{}, 0.0, 42);
    EXPECT_EQ(state.counts, (CompartmentCounts{190, 6, 3, 1}));
    EXPECT_EQ(state.recount(), state.counts);
    EXPECT_EQ(state.day, 0);
    EXPECT_FALSE(state.masks_active);
    for (std::size_t v = 0; v < state.node_count(); ++v) {
        EXPECT_EQ(state.complier[v], 1);
        EXPECT_EQ(state.wears_mask[v], 0);
        EXPECT_EQ(state.quarantined[v], 0);
    }
}

TEST(InitState, SeededPlacementIsUniform) {
    // Each node should carry the single infected seed with probability
    // 1/n; count over many seeds and check a few nodes.
    ContactGraph g = gen_er(50, 0.1, 2);
    std::vector<int> hits(50, 0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        EpidemicState state = init_state(g, CompartmentCounts{49, 0, 1, 0}, MaskParams{}, 0.0, t);
        for (std::size_t v = 0; v < 50; ++v) {
            if (state.compartments[v] == Compartment::Infected) ++hits[v];
        }
    }
    // Expected 400 per node, sd ~ 19.8; allow 5 sigma.
    for (int v = 0; v < 50; ++v) EXPECT_NEAR(hits[v], 400, 100);
}

TEST(InitState, NoncomplianceFractionWithinThreeSigma) {
    ContactGraph g = gen_er(17800, 0.0014, 3);
    EpidemicState state =
        init_state(g, CompartmentCounts{17796, 3, 1, 0}, MaskParams{}, 0.26, 2024);
    std::size_t compliers = 0;
    for (std::uint8_t flag : state.complier) compliers += flag;
    // Binomial(17800, 0.74): mean 13172, sd ~ 58.5.
    EXPECT_NEAR(static_cast<double>(compliers), 0.74 * 17800.0, 3.0 * 58.5);
}

TEST(InitState, Validation) {
    ContactGraph g(10);
    EXPECT_THROW(init_state(g, CompartmentCounts{5, 3, 1, 0}, MaskParams{}, 0.0, 1),
                 std::invalid_argument);  // does not sum to n
    EXPECT_THROW(init_state(g, CompartmentCounts{6, 3, 1, 0}, MaskParams{}, -0.1, 1),
                 std::invalid_argument);
    EXPECT_THROW(init_state(ContactGraph{}, CompartmentCounts{}, MaskParams{}, 0.0, 1),
                 std::invalid_argument);
    EXPECT_THROW(init_state(g, CompartmentCounts{6, 3, 1, 0},
                            MaskParams{-1.0, 0.8, 1.0, 1.0}, 0.0, 1),
                 std::invalid_argument);
}

TEST(Step, ForcedTransmissionOnStar) {
    ContactGraph g = star_graph(4);
    EpidemicState state = manual_state(
        g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible,
            Compartment::Susceptible, Compartment::Susceptible}, 1);
    StepDelta delta = step(state, g, DiseaseParams{1.0, 0.0, 0.0});
    EXPECT_EQ(delta.exposed, (std::vector<NodeId>{1, 2, 3, 4}));
    EXPECT_TRUE(delta.infected.empty());
    EXPECT_TRUE(delta.recovered.empty());
    EXPECT_EQ(state.counts, (CompartmentCounts{0, 4, 1, 0}));
    EXPECT_EQ(state.day, 1);
}

TEST(Step, ZeroPhiNeverTransmits) {
    ContactGraph g = star_graph(4);
    EpidemicState state = manual_state(
        g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible,
            Compartment::Susceptible, Compartment::Susceptible}, 1);
    for (int d = 0; d < 50; ++d) step(state, g, DiseaseParams{0.0, 0.5, 0.0});
    EXPECT_EQ(state.counts.s, 4u);
}

TEST(Step, StarMeanExposuresMatchesBinomial) {
    // Four susceptible leaves around one infected center at phi = 0.5:
    // new exposures per step are Binomial(4, 0.5), mean 2, variance 1.
    ContactGraph g = star_graph(4);
    const int trials = 10000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        EpidemicState state = manual_state(
            g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible,
                Compartment::Susceptible, Compartment::Susceptible}, 1000 + t);
        StepDelta delta = step(state, g, DiseaseParams{0.5, 0.0, 0.0});
        total += static_cast<double>(delta.exposed.size());
    }
    // sd of the mean is 1/sqrt(trials) = 0.01; allow 3 sigma.
    EXPECT_NEAR(total / trials, 2.0, 0.03);
}

TEST(Step, TriangleExposureMatchesClosedForm) {
    // Susceptible node with two infected neighbors at the default phi:
    // P(exposed) = 1 - (1 - 0.0371)^2 = 0.07282359.
    ContactGraph g(3);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    const double phi = 0.0371;
    const double expected = 1.0 - (1.0 - phi) * (1.0 - phi);
    const int trials = 100000;
    int exposures = 0;
    for (int t = 0; t < trials; ++t) {
        EpidemicState state = manual_state(
            g, {Compartment::Susceptible, Compartment::Infected, Compartment::Infected}, 50000 + t);
        StepDelta delta = step(state, g, DiseaseParams{phi, 0.0, 0.0});
        exposures += delta.exposed.empty() ? 0 : 1;
    }
    double sd = std::sqrt(expected * (1 - expected) / trials);  // ~0.00082
    EXPECT_NEAR(static_cast<double>(exposures) / trials, expected, 3.0 * sd);
}

TEST(Step, ProgressionCommitsAtEndOfStep) {
    // Chain I - S with sigma = 1: the node exposed today must not draw a
    // progression today, so it becomes infected exactly one step later.
    ContactGraph g(2);
    g.add_edge(0, 1);
    EpidemicState state =
        manual_state(g, {Compartment::Infected, Compartment::Susceptible}, 3);
    DiseaseParams disease{1.0, 1.0, 0.0};
    StepDelta first = step(state, g, disease);
    EXPECT_EQ(first.exposed, (std::vector<NodeId>{1}));
    EXPECT_TRUE(first.infected.empty());
    EXPECT_EQ(state.compartments[1], Compartment::Exposed);
    StepDelta second = step(state, g, disease);
    EXPECT_EQ(second.infected, (std::vector<NodeId>{1}));
    EXPECT_EQ(state.compartments[1], Compartment::Infected);
}

TEST(Step, RecoveryRemovesInfectiousness) {
    // gamma = 1 recovers the seed on day one; the delta commits after the
    // contact phase, so day one can still expose, day two cannot.
    ContactGraph g = star_graph(2);
    EpidemicState state = manual_state(
        g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible}, 5);
    DiseaseParams disease{0.0, 0.0, 1.0};
    StepDelta first = step(state, g, disease);
    EXPECT_EQ(first.recovered, (std::vector<NodeId>{0}));
    EXPECT_EQ(state.compartments[0], Compartment::Recovered);
    StepDelta second = step(state, g, disease);
    EXPECT_TRUE(second.recovered.empty());
}

TEST(Step, RecoveredNodesAreNeverReinfected) {
    ContactGraph g(2);
    g.add_edge(0, 1);
    EpidemicState state = manual_state(g, {Compartment::Infected, Compartment::Recovered}, 7);
    for (int d = 0; d < 20; ++d) step(state, g, DiseaseParams{1.0, 1.0, 0.0});
    EXPECT_EQ(state.compartments[1], Compartment::Recovered);
    EXPECT_EQ(state.counts.r, 1u);
}

TEST(Step, NeutralMaskMultipliersAreDrawIdentical) {
    // With multipliers all 1 the mask machinery must not change a single
    // draw: trajectories with masks on and off are identical step by step.
    ContactGraph g = gen_er(300, 0.03, 11);
    std::vector<Compartment> compartments(300, Compartment::Susceptible);
    compartments[0] = Compartment::Infected;
    compartments[1] = Compartment::Exposed;

    EpidemicState plain = manual_state(g, compartments, 99);
    EpidemicState masked = manual_state(g, compartments, 99, MaskParams{1.0, 1.0, 1.0, 1.0});
    masked.masks_active = true;
    std::fill(masked.wears_mask.begin(), masked.wears_mask.end(), std::uint8_t{1});

    DiseaseParams disease{0.05, 0.2, 1.0 / 14.0};
    for (int d = 0; d < 60; ++d) {
        step(plain, g, disease);
        step(masked, g, disease);
        ASSERT_EQ(plain.counts, masked.counts) << "day " << d;
    }
    EXPECT_EQ(plain.compartments, masked.compartments);
}

TEST(Step, MaskMultipliersScaleTransmission) {
    // Star center infected and masked, leaves masked, phi = 0.5 with
    // both_masked = 0.6: per-leaf exposure probability is 0.30.
    ContactGraph g = star_graph(4);
    MaskParams masks;  // 0.6 / 0.8 / 1.0
    const int trials = 20000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        EpidemicState state = manual_state(
            g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible,
                Compartment::Susceptible, Compartment::Susceptible}, 7000 + t, masks);
        state.masks_active = true;
        std::fill(state.wears_mask.begin(), state.wears_mask.end(), std::uint8_t{1});
        StepDelta delta = step(state, g, DiseaseParams{0.5, 0.0, 0.0});
        total += static_cast<double>(delta.exposed.size());
    }
    // Binomial(4, 0.3): mean 1.2, variance 0.84; sd of mean ~ 0.0065.
    EXPECT_NEAR(total / trials, 1.2, 0.03);
}

TEST(Step, MaskMultiplierSelection) {
    ContactGraph g(2);
    g.add_edge(0, 1);
    EpidemicState state = manual_state(g, {Compartment::Infected, Compartment::Susceptible}, 1);
    EXPECT_DOUBLE_EQ(mask_multiplier(state, 0, 1), 1.0);  // inactive mandate
    state.masks_active = true;
    EXPECT_DOUBLE_EQ(mask_multiplier(state, 0, 1), 1.0);  // no_mask
    state.wears_mask[0] = 1;
    EXPECT_DOUBLE_EQ(mask_multiplier(state, 0, 1), 0.8);
    state.wears_mask[1] = 1;
    EXPECT_DOUBLE_EQ(mask_multiplier(state, 0, 1), 0.6);
}

TEST(Step, ContactSamplingRateThinsTransmission) {
    // Activity draw at rate 0.5 then transmission at phi 0.5: per-leaf
    // exposure probability 0.25.
    ContactGraph g = star_graph(4);
    g.set_contact_sampling_rate(0.5);
    const int trials = 20000;
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        EpidemicState state = manual_state(
            g, {Compartment::Infected, Compartment::Susceptible, Compartment::Susceptible,
                Compartment::Susceptible, Compartment::Susceptible}, 90000 + t);
        StepDelta delta = step(state, g, DiseaseParams{0.5, 0.0, 0.0});
        total += static_cast<double>(delta.exposed.size());
    }
    // Binomial(4, 0.25): mean 1.0, sd of mean ~ 0.0061.
    EXPECT_NEAR(total / trials, 1.0, 0.03);
}

TEST(Step, ConservesPopulationOnRandomRuns) {
    ContactGraph g = gen_ba(400, 3, 17);
    EpidemicState state = init_state(g, CompartmentCounts{396, 2, 2, 0}, MaskParams{}, 0.2, 31);
    const std::uint32_t n = g.node_count();
    for (int d = 0; d < 120; ++d) {
        StepDelta delta = step(state, g, DiseaseParams{0.05, 0.2, 0.1});
        ASSERT_EQ(state.counts.total(), n);
        ASSERT_EQ(state.recount(), state.counts);
        // A node appears in at most one delta list.
        for (NodeId v : delta.exposed) {
            ASSERT_EQ(state.compartments[v], Compartment::Exposed);
        }
    }
}

TEST(Step, DeterministicPerSeed) {
    ContactGraph g = gen_er(200, 0.05, 23);
    auto run = [&](std::uint64_t seed) {
        EpidemicState state = init_state(g, CompartmentCounts{196, 3, 1, 0}, MaskParams{}, 0.26, seed);
        std::vector<CompartmentCounts> curve;
        for (int d = 0; d < 80; ++d) {
            step(state, g, DiseaseParams{0.04, 0.2, 0.1});
            curve.push_back(state.counts);
        }
        return curve;
    };
    EXPECT_EQ(run(12), run(12));
    EXPECT_NE(run(12), run(13));
}

TEST(Step, HigherPhiNeverLowersMeanAttackRate) {
    // Stochastic dominance in phi, checked at 50 replicates per level with
    // a one-sided 1% tolerance for replicate noise.
    ContactGraph g = gen_er(500, 0.02, 29);
    auto mean_attack = [&](double phi) {
        double total = 0.0;
        const int replicates = 50;
        for (int rep = 0; rep < replicates; ++rep) {
            EpidemicState state = init_state(g, CompartmentCounts{496, 3, 1, 0}, MaskParams{}, 0.0,
                                             derive_seed(555, rep));
            for (int d = 0; d < 150; ++d) step(state, g, DiseaseParams{phi, 0.2, 1.0 / 14.0});
            total += static_cast<double>(500 - state.counts.s) / 500.0;
        }
        return total / replicates;
    };
    double previous = mean_attack(0.01);
    for (double phi : {0.02, 0.04, 0.08, 0.16}) {
        double current = mean_attack(phi);
        EXPECT_GE(current, previous - 0.01) << "phi " << phi;
        previous = current;
    }
}

TEST(Step, RejectsMismatchedStateAndGraph) {
    ContactGraph g(3);
    EpidemicState state = manual_state(ContactGraph(2), {Compartment::Susceptible,
                                                         Compartment::Susceptible}, 1);
    EXPECT_THROW(step(state, g, DiseaseParams{0.1, 0.1, 0.1}), std::invalid_argument);
}

}  // namespace
}  // namespace netseir
