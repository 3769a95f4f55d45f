#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/graph.hpp"
#include "netseir/rng.hpp"

namespace netseir {

enum class Compartment : std::uint8_t { Susceptible, Exposed, Infected, Recovered };

inline const char* compartment_name(Compartment c) {
    switch (c) {
        case Compartment::Susceptible: return "S";
        case Compartment::Exposed: return "E";
        case Compartment::Infected: return "I";
        case Compartment::Recovered: return "R";
    }
    return "?";
}

// Per-day transition probabilities of the discrete node-level model.
struct DiseaseParams {
    double phi = 0.0;    // transmission per infected-susceptible contact
    double sigma = 0.0;  // E -> I
    double gamma = 0.0;  // I -> R

    void validate() const {
        auto check = [](double p, const char* name) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
            }
        };
        check(phi, "phi");
        check(sigma, "sigma");
        check(gamma, "gamma");
    }
};

// Multipliers applied to phi depending on how many endpoints of a contact
// wear masks, plus the fraction of compliers who adopt a mask when a
// mandate activates. All multipliers equal to 1 reproduces the mask-free
// model exactly, draw for draw.
struct MaskParams {
    double both_masked = 0.6;
    double one_masked = 0.8;
    double no_mask = 1.0;
    double coverage = 1.0;

    void validate() const {
        auto check = [](double m, const char* name) {
            if (!(m >= 0.0)) {
                throw std::invalid_argument(std::string(name) + " must be non-negative");
            }
        };
        check(both_masked, "both_masked");
        check(one_masked, "one_masked");
        check(no_mask, "no_mask");
        if (!(coverage >= 0.0 && coverage <= 1.0)) {
            throw std::invalid_argument("coverage must be in [0, 1]");
        }
    }
};

struct CompartmentCounts {
    std::uint32_t s = 0, e = 0, i = 0, r = 0;

    std::uint32_t total() const { return s + e + i + r; }

    bool operator==(const CompartmentCounts&) const = default;
};

// Nodes moved by one call to step(). A node appears in at most one list.
struct StepDelta {
    std::vector<NodeId> exposed;    // S -> E
    std::vector<NodeId> infected;   // E -> I
    std::vector<NodeId> recovered;  // I -> R
};

// Full mutable state of one stochastic replicate.
struct EpidemicState {
    std::vector<Compartment> compartments;
    std::vector<std::uint8_t> complier;     // follows interventions when asked
    std::vector<std::uint8_t> wears_mask;   // set while a mask mandate is active
    std::vector<std::uint8_t> quarantined;  // bookkeeping for quarantine policies
    CompartmentCounts counts;
    MaskParams masks;
    bool masks_active = false;
    int day = 0;
    Rng rng;

    std::size_t node_count() const { return compartments.size(); }

    CompartmentCounts recount() const {
        CompartmentCounts c;
        for (Compartment comp : compartments) {
            switch (comp) {
                case Compartment::Susceptible: ++c.s; break;
                case Compartment::Exposed: ++c.e; break;
                case Compartment::Infected: ++c.i; break;
                case Compartment::Recovered: ++c.r; break;
            }
        }
        return c;
    }
};

// Seeds a replicate: compartments are assigned to a uniform random
// permutation of the nodes (E first, then I, then R, the rest stay S),
// then each node independently refuses interventions with probability
// `noncompliance`. All randomness comes from `seed`.
inline EpidemicState init_state(const ContactGraph& graph, CompartmentCounts init,
                                MaskParams masks, double noncompliance, std::uint64_t seed) {
    const std::size_t n = graph.node_count();
    if (n == 0) throw std::invalid_argument("init_state: empty graph");
    if (init.total() != n) {
        throw std::invalid_argument("init_state: compartment counts must sum to the node count");
    }
    if (!(noncompliance >= 0.0 && noncompliance <= 1.0)) {
        throw std::invalid_argument("init_state: noncompliance must be in [0, 1]");
    }
    masks.validate();

    EpidemicState state;
    state.rng = Rng(seed);
    state.masks = masks;
    state.compartments.assign(n, Compartment::Susceptible);
    state.complier.assign(n, 1);
    state.wears_mask.assign(n, 0);
    state.quarantined.assign(n, 0);

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    state.rng.shuffle(order);
    std::size_t cursor = 0;
    for (std::uint32_t c = 0; c < init.e; ++c) state.compartments[order[cursor++]] = Compartment::Exposed;
    for (std::uint32_t c = 0; c < init.i; ++c) state.compartments[order[cursor++]] = Compartment::Infected;
    for (std::uint32_t c = 0; c < init.r; ++c) state.compartments[order[cursor++]] = Compartment::Recovered;
    state.counts = init;

    for (std::size_t v = 0; v < n; ++v) {
        if (state.rng.bernoulli(noncompliance)) state.complier[v] = 0;
    }
    return state;
}

inline double mask_multiplier(const EpidemicState& state, NodeId u, NodeId v) {
    if (!state.masks_active) return 1.0;
    int masked = (state.wears_mask[u] ? 1 : 0) + (state.wears_mask[v] ? 1 : 0);
    if (masked == 2) return state.masks.both_masked;
    if (masked == 1) return state.masks.one_masked;
    return state.masks.no_mask;
}

// Advances the epidemic by one day. Contact phase first: every infected
// node, in ascending id order, contacts its neighbors in ascending id
// order; each contact with a susceptible neighbor consumes exactly one
// transmission draw (preceded by one activity draw when the graph's
// contact sampling rate is below 1). Progression second: one sigma draw
// per exposed node, then one gamma draw per infected node, both in
// ascending id order. All transitions commit at the end of the step, so
// nodes exposed today are not eligible to progress today and the number
// of draws depends only on the state at the start of the step.
inline StepDelta step(EpidemicState& state, const ContactGraph& graph,
                      const DiseaseParams& disease) {
    disease.validate();
    const std::size_t n = graph.node_count();
    if (state.compartments.size() != n) {
        throw std::invalid_argument("step: state and graph node counts differ");
    }
    const double rate = graph.contact_sampling_rate();

    StepDelta delta;
    std::vector<std::uint8_t> marked(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        if (state.compartments[u] != Compartment::Infected) continue;
        for (NodeId v : graph.neighbors(u)) {
            if (state.compartments[v] != Compartment::Susceptible) continue;
            if (rate < 1.0 && !state.rng.bernoulli(rate)) continue;
            double phi_eff = disease.phi * mask_multiplier(state, u, v);
            if (state.rng.bernoulli(phi_eff) && !marked[v]) {
                marked[v] = 1;
                delta.exposed.push_back(v);
            }
        }
    }
    for (NodeId v = 0; v < n; ++v) {
        if (state.compartments[v] != Compartment::Exposed) continue;
        if (state.rng.bernoulli(disease.sigma)) delta.infected.push_back(v);
    }
    for (NodeId v = 0; v < n; ++v) {
        if (state.compartments[v] != Compartment::Infected) continue;
        if (state.rng.bernoulli(disease.gamma)) delta.recovered.push_back(v);
    }

    for (NodeId v : delta.exposed) state.compartments[v] = Compartment::Exposed;
    for (NodeId v : delta.infected) state.compartments[v] = Compartment::Infected;
    for (NodeId v : delta.recovered) state.compartments[v] = Compartment::Recovered;
    state.counts.s -= static_cast<std::uint32_t>(delta.exposed.size());
    state.counts.e += static_cast<std::uint32_t>(delta.exposed.size());
    state.counts.e -= static_cast<std::uint32_t>(delta.infected.size());
    state.counts.i += static_cast<std::uint32_t>(delta.infected.size());
    state.counts.i -= static_cast<std::uint32_t>(delta.recovered.size());
    state.counts.r += static_cast<std::uint32_t>(delta.recovered.size());
    ++state.day;
    return delta;
}

}  // namespace netseir
