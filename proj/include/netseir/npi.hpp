#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/engine.hpp"
#include "netseir/graph.hpp"
#include "netseir/rng.hpp"

namespace netseir {

enum class NpiKind : std::uint8_t { Quarantine, SocialDistancing, RemoveHubs, Masks, Reopen };

inline const char* npi_kind_name(NpiKind kind) {
    switch (kind) {
        case NpiKind::Quarantine: return "quarantine";
        case NpiKind::SocialDistancing: return "social_distancing";
        case NpiKind::RemoveHubs: return "remove_hubs";
        case NpiKind::Masks: return "masks";
        case NpiKind::Reopen: return "reopen";
    }
    return "?";
}

inline NpiKind parse_npi_kind(const std::string& name) {
    if (name == "quarantine") return NpiKind::Quarantine;
    if (name == "social_distancing") return NpiKind::SocialDistancing;
    if (name == "remove_hubs") return NpiKind::RemoveHubs;
    if (name == "masks") return NpiKind::Masks;
    if (name == "reopen") return NpiKind::Reopen;
    throw std::invalid_argument("unknown intervention kind '" + name + "'");
}

// One scheduled intervention. Only the fields of the given kind are
// meaningful; `tag` names the event for later Reopen and must be unique
// within a timeline (it is filled in from kind and day when left empty).
struct NpiEvent {
    int day = 0;
    NpiKind kind = NpiKind::Masks;
    double q_frac = 1.0;       // Quarantine: per-node isolation success probability
    double edge_frac = 0.0;    // SocialDistancing: fraction of each complier's edges
    double r_frac = 0.0;       // RemoveHubs: fraction of nodes counted as hubs
    double p_success = 1.0;    // RemoveHubs: per-hub closure probability
    RemovalTag tag;
    RemovalTag reopen_target;                      // Reopen only
    std::optional<CompartmentCounts> calibration;  // Reopen only

    void validate() const {
        if (day < 0) throw std::invalid_argument("intervention day must be >= 0");
        auto frac = [](double x, const char* name) {
            if (!(x >= 0.0 && x <= 1.0)) {
                throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
            }
        };
        switch (kind) {
            case NpiKind::Quarantine: frac(q_frac, "q_frac"); break;
            case NpiKind::SocialDistancing: frac(edge_frac, "edge_frac"); break;
            case NpiKind::RemoveHubs:
                if (!(r_frac > 0.0) || r_frac > 1.0) {
                    throw std::invalid_argument("r_frac must be in (0, 1]");
                }
                frac(p_success, "p_success");
                break;
            case NpiKind::Masks: break;
            case NpiKind::Reopen:
                if (reopen_target.empty()) {
                    throw std::invalid_argument("reopen requires a target tag");
                }
                break;
        }
    }
};

inline RemovalTag default_npi_tag(const NpiEvent& event) {
    return std::string(npi_kind_name(event.kind)) + "@" + std::to_string(event.day);
}

// Chronological intervention schedule for a scenario.
struct NpiTimeline {
    std::vector<NpiEvent> events;

    // Checks day ordering, per-event fields, tag uniqueness, and that every
    // Reopen names an earlier, not-yet-reopened event. Empty tags are
    // replaced by kind@day defaults first.
    void validate() {
        int prev_day = 0;
        std::set<RemovalTag> open_tags;
        for (NpiEvent& event : events) {
            if (event.tag.empty() && event.kind != NpiKind::Reopen) {
                event.tag = default_npi_tag(event);
            }
            event.validate();
            if (event.day < prev_day) {
                throw std::invalid_argument("intervention days must be non-decreasing");
            }
            prev_day = event.day;
            if (event.kind == NpiKind::Reopen) {
                if (!open_tags.count(event.reopen_target)) {
                    throw std::invalid_argument("reopen target '" + event.reopen_target +
                                                "' does not match an earlier open intervention");
                }
                open_tags.erase(event.reopen_target);
            } else {
                if (!open_tags.insert(event.tag).second) {
                    throw std::invalid_argument("duplicate intervention tag '" + event.tag + "'");
                }
            }
        }
    }
};

// One quarantine pass: every exposed or infected complier not yet
// quarantined is, with probability q_frac, stripped of all active edges
// (ledgered under `tag`) and flagged. Returns the nodes newly isolated.
// Nodes are visited in ascending id order, one draw each.
inline std::vector<NodeId> apply_quarantine(EpidemicState& state, ContactGraph& graph,
                                            double q_frac, const RemovalTag& tag) {
    if (!(q_frac >= 0.0 && q_frac <= 1.0)) {
        throw std::invalid_argument("apply_quarantine: q_frac must be in [0, 1]");
    }
    std::vector<NodeId> isolated;
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        if (!state.complier[v] || state.quarantined[v]) continue;
        Compartment c = state.compartments[v];
        if (c != Compartment::Exposed && c != Compartment::Infected) continue;
        if (!state.rng.bernoulli(q_frac)) continue;
        state.quarantined[v] = 1;
        graph.remove_all_edges_of(v, tag);
        isolated.push_back(v);
    }
    return isolated;
}

// Removes round-half-up(edge_frac * degree) uniformly chosen active edges
// from every complier node, in ascending id order; the degree is the one
// observed when the node is processed, so an edge already removed through
// its other endpoint no longer counts.
inline void apply_social_distancing(ContactGraph& graph, double edge_frac,
                                    std::span<const std::uint8_t> complier,
                                    const RemovalTag& tag, Rng& rng) {
    if (!(edge_frac >= 0.0 && edge_frac <= 1.0)) {
        throw std::invalid_argument("apply_social_distancing: edge_frac must be in [0, 1]");
    }
    if (complier.size() != graph.node_count()) {
        throw std::invalid_argument("apply_social_distancing: complier flags must cover every node");
    }
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        if (!complier[u]) continue;
        auto span = graph.neighbors(u);
        if (span.empty()) continue;
        // Half-up rounding; the epsilon keeps products like 0.35 * 10 that
        // land just under .5 in binary from rounding down.
        auto remove = static_cast<std::size_t>(
            std::floor(edge_frac * static_cast<double>(span.size()) + 0.5 + 1e-9));
        if (remove == 0) continue;
        remove = std::min(remove, span.size());
        std::vector<NodeId> picked(span.begin(), span.end());
        rng.partial_shuffle(picked, remove);
        std::vector<Edge> edges;
        edges.reserve(remove);
        for (std::size_t i = 0; i < remove; ++i) edges.push_back(canonical_edge(u, picked[i]));
        graph.remove_edges(edges, tag);
    }
}

// Strips each of the top ceil(r_frac * n) degree nodes of all active edges
// with probability p_success (one draw per hub, in ranking order).
// Compliance flags are ignored: closing a hub is an institutional action.
// Returns the hubs actually closed.
inline std::vector<NodeId> apply_remove_hubs(ContactGraph& graph, double r_frac, double p_success,
                                             const RemovalTag& tag, Rng& rng) {
    if (!(p_success >= 0.0 && p_success <= 1.0)) {
        throw std::invalid_argument("apply_remove_hubs: p_success must be in [0, 1]");
    }
    std::vector<NodeId> closed;
    for (NodeId hub : graph.top_degree_nodes(r_frac)) {
        if (!rng.bernoulli(p_success)) continue;
        graph.remove_all_edges_of(hub, tag);
        closed.push_back(hub);
    }
    return closed;
}

// Puts masks on compliers and activates the mask multipliers. With full
// coverage (the default) no randomness is consumed; below 1, each
// complier adopts a mask independently, in ascending id order.
inline void apply_masks(EpidemicState& state) {
    const double coverage = state.masks.coverage;
    for (std::size_t v = 0; v < state.node_count(); ++v) {
        if (!state.complier[v]) {
            state.wears_mask[v] = 0;
        } else if (coverage >= 1.0) {
            state.wears_mask[v] = 1;
        } else {
            state.wears_mask[v] = state.rng.bernoulli(coverage) ? 1 : 0;
        }
    }
    state.masks_active = true;
}

inline void clear_masks(EpidemicState& state) {
    std::fill(state.wears_mask.begin(), state.wears_mask.end(), std::uint8_t{0});
    state.masks_active = false;
}

// Re-assigns compartments to a fresh uniform permutation of the nodes so
// the aggregate counts equal `targets`; quarantine flags are cleared for
// nodes that end up outside E/I.
inline void calibrate_compartments(EpidemicState& state, CompartmentCounts targets) {
    const std::size_t n = state.node_count();
    if (targets.total() != n) {
        throw std::invalid_argument("calibration counts must sum to the node count");
    }
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    state.rng.shuffle(order);
    std::fill(state.compartments.begin(), state.compartments.end(), Compartment::Susceptible);
    std::size_t cursor = 0;
    for (std::uint32_t c = 0; c < targets.e; ++c) state.compartments[order[cursor++]] = Compartment::Exposed;
    for (std::uint32_t c = 0; c < targets.i; ++c) state.compartments[order[cursor++]] = Compartment::Infected;
    for (std::uint32_t c = 0; c < targets.r; ++c) state.compartments[order[cursor++]] = Compartment::Recovered;
    state.counts = targets;
    for (std::size_t v = 0; v < n; ++v) {
        if (!state.quarantined[v]) continue;
        Compartment c = state.compartments[v];
        if (c != Compartment::Exposed && c != Compartment::Infected) state.quarantined[v] = 0;
    }
}

// Restores the edges removed under `tag` and optionally re-calibrates the
// compartment totals. The tag must have ledgered removals; lifting
// interventions that never touched the graph (masks, an empty quarantine)
// is the timeline runner's job.
inline void apply_reopen(EpidemicState& state, ContactGraph& graph, const RemovalTag& tag,
                         const std::optional<CompartmentCounts>& calibration = std::nullopt) {
    graph.restore_edges(tag);  // throws on unknown tag
    if (calibration) calibrate_compartments(state, *calibration);
}

// Drives an NpiTimeline over a running replicate. Call begin_day(d, ...)
// once per simulation day before step(): it fires the events scheduled up
// to day d in timeline order, then runs the daily sweep of every
// quarantine policy activated on an earlier day, in activation order.
class TimelineRunner {
public:
    explicit TimelineRunner(NpiTimeline timeline) : timeline_(std::move(timeline)) {
        timeline_.validate();
    }

    const NpiTimeline& timeline() const { return timeline_; }

    void begin_day(int day, EpidemicState& state, ContactGraph& graph) {
        while (cursor_ < timeline_.events.size() && timeline_.events[cursor_].day <= day) {
            fire(timeline_.events[cursor_], day, state, graph);
            ++cursor_;
        }
        for (QuarantinePolicy& policy : policies_) {
            if (!policy.active || policy.activated_day >= day) continue;
            auto isolated = apply_quarantine(state, graph, policy.q_frac, policy.tag);
            policy.nodes.insert(policy.nodes.end(), isolated.begin(), isolated.end());
        }
    }

private:
    struct QuarantinePolicy {
        RemovalTag tag;
        double q_frac = 0.0;
        int activated_day = 0;
        bool active = true;
        std::vector<NodeId> nodes;
    };

    void fire(const NpiEvent& event, int day, EpidemicState& state, ContactGraph& graph) {
        switch (event.kind) {
            case NpiKind::Quarantine: {
                QuarantinePolicy policy{event.tag, event.q_frac, day, true, {}};
                policy.nodes = apply_quarantine(state, graph, event.q_frac, event.tag);
                policies_.push_back(std::move(policy));
                break;
            }
            case NpiKind::SocialDistancing:
                apply_social_distancing(graph, event.edge_frac, state.complier, event.tag,
                                        state.rng);
                break;
            case NpiKind::RemoveHubs:
                apply_remove_hubs(graph, event.r_frac, event.p_success, event.tag, state.rng);
                break;
            case NpiKind::Masks:
                apply_masks(state);
                mask_tags_.insert(event.tag);
                break;
            case NpiKind::Reopen: reopen(event, state, graph); break;
        }
    }

    void reopen(const NpiEvent& event, EpidemicState& state, ContactGraph& graph) {
        const RemovalTag& target = event.reopen_target;
        if (auto it = mask_tags_.find(target); it != mask_tags_.end()) {
            clear_masks(state);
            mask_tags_.erase(it);
        } else if (QuarantinePolicy* policy = find_policy(target)) {
            for (NodeId v : policy->nodes) state.quarantined[v] = 0;
            policy->active = false;
            if (graph.has_removal_tag(target)) graph.restore_edges(target);
        } else {
            // Distancing or hub removal; the ledger entry is absent only
            // when the event removed nothing (e.g. p_success drew all
            // failures), in which case there is nothing to restore.
            if (graph.has_removal_tag(target)) graph.restore_edges(target);
        }
        // A restoration can reconnect a node some other policy still holds
        // in quarantine (its edge was ledgered under the reopened tag, not
        // the quarantine's). Strip those edges again under the quarantine
        // tag so isolation survives unrelated reopenings; they come back
        // when the quarantine itself is lifted.
        for (QuarantinePolicy& policy : policies_) {
            if (!policy.active) continue;
            for (NodeId v : policy.nodes) {
                if (state.quarantined[v] && graph.degree(v) > 0) {
                    graph.remove_all_edges_of(v, policy.tag);
                }
            }
        }
        if (event.calibration) calibrate_compartments(state, *event.calibration);
    }

    QuarantinePolicy* find_policy(const RemovalTag& tag) {
        for (QuarantinePolicy& policy : policies_) {
            if (policy.tag == tag && policy.active) return &policy;
        }
        return nullptr;
    }

    NpiTimeline timeline_;
    std::size_t cursor_ = 0;
    std::vector<QuarantinePolicy> policies_;
    std::set<RemovalTag> mask_tags_;
};

}  // namespace netseir
