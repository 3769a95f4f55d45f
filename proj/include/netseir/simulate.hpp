#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "netseir/engine.hpp"
#include "netseir/graph.hpp"
#include "netseir/npi.hpp"
#include "netseir/rng.hpp"
#include "netseir/util.hpp"

namespace netseir {

// Everything one replicate needs besides the graph.
struct RunConfig {
    DiseaseParams disease;
    MaskParams masks;
    CompartmentCounts init;
    double noncompliance = 0.0;
    NpiTimeline npis;
    int days = 0;
    std::uint64_t seed = 0;
};

// Simulates one replicate and returns the counts for days 0..days (entry 0
// is the initial state). Interventions scheduled for day d fire before the
// step that takes the state from day d to day d+1. The input graph is
// cloned; interventions mutate only the clone.
inline std::vector<CompartmentCounts> run_epidemic(const ContactGraph& base,
                                                   const RunConfig& config) {
    if (config.days < 0) throw std::invalid_argument("run_epidemic: days must be >= 0");
    ContactGraph graph = base;
    EpidemicState state =
        init_state(graph, config.init, config.masks, config.noncompliance, config.seed);
    TimelineRunner runner(config.npis);
    std::vector<CompartmentCounts> daily;
    daily.reserve(static_cast<std::size_t>(config.days) + 1);
    daily.push_back(state.counts);
    for (int day = 0; day < config.days; ++day) {
        runner.begin_day(day, state, graph);
        step(state, graph, config.disease);
        daily.push_back(state.counts);
    }
    return daily;
}

// Independent replicates; replicate i runs with seed derived from
// (config.seed, i), so results are stable under adding replicates and
// independent of the worker count.
inline std::vector<std::vector<CompartmentCounts>> run_replicates(const ContactGraph& base,
                                                                  const RunConfig& config,
                                                                  int replicates,
                                                                  unsigned threads = 1) {
    if (replicates < 1) throw std::invalid_argument("run_replicates: need at least one replicate");
    std::vector<std::vector<CompartmentCounts>> curves(replicates);
    parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t i) {
        RunConfig replicate = config;
        replicate.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
        curves[i] = run_epidemic(base, replicate);
    });
    return curves;
}

}  // namespace netseir
