#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "netseir/calibrate.hpp"
#include "netseir/curves.hpp"
#include "netseir/dates.hpp"
#include "netseir/engine.hpp"
#include "netseir/graph_io.hpp"
#include "netseir/ingest.hpp"
#include "netseir/netgen.hpp"
#include "netseir/npi.hpp"
#include "netseir/simulate.hpp"
#include "netseir/util.hpp"

namespace netseir {

struct ColocationSource {
    std::filesystem::path log;
    IngestSpec spec;
};

struct GraphSource {
    enum class Kind : std::uint8_t { Generator, EdgeList, Colocation };

    Kind kind = Kind::Generator;
    GenSpec gen;
    std::filesystem::path edge_list;
    ColocationSource colocation;
    double contact_sampling_rate = 1.0;
};

// A fully described experiment: one graph, one parameterized epidemic,
// one intervention timeline, N replicates. Parsed from JSON; the
// canonical dump (with CLI overrides already applied) feeds the
// provenance hash embedded in every output file.
struct Scenario {
    GraphSource graph;
    DiseaseParams disease;
    MaskParams masks;
    double noncompliance = 0.26;
    std::optional<CompartmentCounts> init;  // absent: (n - 4, 3, 1, 0)
    std::optional<CivilDate> anchor;
    NpiTimeline npis;
    int days = 0;
    int replicates = 10;
    std::uint64_t seed = 0;
    std::string canonical;
};

namespace scenario_detail {

using Json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& field, const std::string& message) {
    throw std::runtime_error("scenario field '" + field + "': " + message);
}

inline void check_keys(const Json& object, const std::string& context,
                       std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) fail(context.empty() ? key : context + "." + key, "unknown field");
    }
}

inline const Json& require(const Json& object, const char* field, const std::string& context) {
    auto it = object.find(field);
    if (it == object.end()) {
        fail(context.empty() ? field : context + "." + field, "required field is missing");
    }
    return *it;
}

inline std::string qualify(const std::string& context, const char* field) {
    return context.empty() ? field : context + "." + field;
}

inline double as_number(const Json& value, const std::string& where) {
    if (!value.is_number()) fail(where, "expected a number");
    return value.get<double>();
}

inline double number(const Json& object, const char* field, const std::string& context) {
    return as_number(require(object, field, context), qualify(context, field));
}

inline double number_or(const Json& object, const char* field, const std::string& context,
                        double fallback) {
    auto it = object.find(field);
    return it == object.end() ? fallback : as_number(*it, qualify(context, field));
}

inline std::int64_t integer(const Json& object, const char* field, const std::string& context) {
    const Json& value = require(object, field, context);
    if (!value.is_number_integer()) fail(qualify(context, field), "expected an integer");
    return value.get<std::int64_t>();
}

inline std::int64_t integer_or(const Json& object, const char* field, const std::string& context,
                               std::int64_t fallback) {
    auto it = object.find(field);
    if (it == object.end()) return fallback;
    if (!it->is_number_integer()) fail(qualify(context, field), "expected an integer");
    return it->get<std::int64_t>();
}

inline std::uint64_t uinteger_or(const Json& object, const char* field, const std::string& context,
                                 std::uint64_t fallback) {
    auto it = object.find(field);
    if (it == object.end()) return fallback;
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                     it->get<std::int64_t>() < 0)) {
        fail(qualify(context, field), "expected a non-negative integer");
    }
    return it->get<std::uint64_t>();
}

inline std::string text(const Json& object, const char* field, const std::string& context) {
    const Json& value = require(object, field, context);
    if (!value.is_string()) fail(qualify(context, field), "expected a string");
    return value.get<std::string>();
}

inline std::int64_t timestamp(const Json& object, const char* field, const std::string& context) {
    const Json& value = require(object, field, context);
    const std::string where = qualify(context, field);
    if (value.is_number_integer()) return value.get<std::int64_t>();
    if (value.is_string()) {
        auto parsed = parse_iso_timestamp(value.get<std::string>());
        if (!parsed) fail(where, "expected epoch seconds or an ISO-8601 timestamp");
        return *parsed;
    }
    fail(where, "expected epoch seconds or an ISO-8601 timestamp");
}

inline CompartmentCounts counts(const Json& object, const std::string& context) {
    if (!object.is_object()) fail(context, "expected an object with s, e, i, r");
    check_keys(object, context, {"s", "e", "i", "r"});
    CompartmentCounts c;
    auto field = [&](const char* name) {
        std::int64_t value = integer(object, name, context);
        if (value < 0) fail(qualify(context, name), "must be non-negative");
        return static_cast<std::uint32_t>(value);
    };
    c.s = field("s");
    c.e = field("e");
    c.i = field("i");
    c.r = field("r");
    return c;
}

inline GraphSource parse_graph(const Json& object) {
    if (!object.is_object()) fail("graph", "expected an object");
    GraphSource source;
    source.contact_sampling_rate = number_or(object, "contact_sampling_rate", "graph", 1.0);
    if (!(source.contact_sampling_rate > 0.0) || source.contact_sampling_rate > 1.0) {
        fail("graph.contact_sampling_rate", "must be in (0, 1]");
    }
    if (object.contains("edge_list")) {
        check_keys(object, "graph", {"edge_list", "contact_sampling_rate"});
        source.kind = GraphSource::Kind::EdgeList;
        source.edge_list = text(object, "edge_list", "graph");
        return source;
    }
    if (object.contains("colocation")) {
        check_keys(object, "graph", {"colocation", "contact_sampling_rate"});
        const Json& colo = object["colocation"];
        if (!colo.is_object()) fail("graph.colocation", "expected an object");
        check_keys(colo, "graph.colocation",
                   {"log", "window_start", "window_end", "target_nodes", "slack_seconds", "seed"});
        source.kind = GraphSource::Kind::Colocation;
        source.colocation.log = text(colo, "log", "graph.colocation");
        source.colocation.spec.window_start = timestamp(colo, "window_start", "graph.colocation");
        source.colocation.spec.window_end = timestamp(colo, "window_end", "graph.colocation");
        source.colocation.spec.target_nodes = static_cast<std::uint32_t>(
            integer_or(colo, "target_nodes", "graph.colocation", 17800));
        source.colocation.spec.slack_seconds =
            integer_or(colo, "slack_seconds", "graph.colocation", 0);
        source.colocation.spec.seed = uinteger_or(colo, "seed", "graph.colocation", 0);
        try {
            source.colocation.spec.validate();
        } catch (const std::exception& e) {
            fail("graph.colocation", e.what());
        }
        return source;
    }
    check_keys(object, "graph", {"family", "n", "k", "p", "m", "seed", "contact_sampling_rate"});
    source.kind = GraphSource::Kind::Generator;
    std::string family = text(object, "family", "graph");
    try {
        source.gen.family = parse_family(family);
    } catch (const std::exception& e) {
        fail("graph.family", e.what());
    }
    std::int64_t n = integer(object, "n", "graph");
    if (n < 1) fail("graph.n", "must be >= 1");
    source.gen.n = static_cast<NodeId>(n);
    source.gen.seed = uinteger_or(object, "seed", "graph", 0);
    switch (source.gen.family) {
        case GraphFamily::Regular:
            source.gen.degree = static_cast<std::uint32_t>(integer(object, "k", "graph"));
            break;
        case GraphFamily::ErdosRenyi: source.gen.edge_prob = number(object, "p", "graph"); break;
        case GraphFamily::BarabasiAlbert:
            source.gen.edges_per_node = static_cast<std::uint32_t>(integer(object, "m", "graph"));
            break;
    }
    return source;
}

inline NpiEvent parse_npi(const Json& object, const std::string& context,
                          const std::optional<CivilDate>& anchor) {
    if (!object.is_object()) fail(context, "expected an object");
    check_keys(object, context,
               {"day", "date", "kind", "q_frac", "edge_frac", "r_frac", "p_success", "tag",
                "target", "calibration"});
    NpiEvent event;
    try {
        event.kind = parse_npi_kind(text(object, "kind", context));
    } catch (const std::exception& e) {
        fail(qualify(context, "kind"), e.what());
    }
    if (object.contains("day") && object.contains("date")) {
        fail(context, "give either day or date, not both");
    }
    if (object.contains("date")) {
        if (!anchor) fail(qualify(context, "date"), "calendar dates need a scenario anchor_date");
        CivilDate date;
        try {
            date = parse_iso_date(text(object, "date", context));
        } catch (const std::exception& e) {
            fail(qualify(context, "date"), e.what());
        }
        event.day = static_cast<int>(days_from_civil(date) - days_from_civil(*anchor));
        if (event.day < 0) fail(qualify(context, "date"), "precedes the anchor_date");
    } else {
        std::int64_t day = integer(object, "day", context);
        if (day < 0) fail(qualify(context, "day"), "must be >= 0");
        event.day = static_cast<int>(day);
    }
    if (object.contains("tag")) event.tag = text(object, "tag", context);
    switch (event.kind) {
        case NpiKind::Quarantine:
            event.q_frac = number_or(object, "q_frac", context, 1.0);
            break;
        case NpiKind::SocialDistancing:
            event.edge_frac = number(object, "edge_frac", context);
            break;
        case NpiKind::RemoveHubs:
            event.r_frac = number(object, "r_frac", context);
            event.p_success = number_or(object, "p_success", context, 0.8);
            break;
        case NpiKind::Masks: break;
        case NpiKind::Reopen:
            event.reopen_target = text(object, "target", context);
            if (object.contains("calibration")) {
                event.calibration =
                    counts(object["calibration"], qualify(context, "calibration"));
            }
            break;
    }
    return event;
}

}  // namespace scenario_detail

inline Scenario parse_scenario(const nlohmann::json& root) {
    using namespace scenario_detail;
    if (!root.is_object()) fail("", "scenario must be a JSON object");
    check_keys(root, "",
               {"graph", "disease", "masks", "noncompliance", "init", "anchor_date", "npis",
                "days", "replicates", "seed"});

    Scenario scenario;
    scenario.graph = parse_graph(require(root, "graph", ""));

    const Json& disease = require(root, "disease", "");
    if (!disease.is_object()) fail("disease", "expected an object");
    check_keys(disease, "disease", {"phi", "sigma", "gamma"});
    scenario.disease.phi = number(disease, "phi", "disease");
    scenario.disease.sigma = number(disease, "sigma", "disease");
    scenario.disease.gamma = number(disease, "gamma", "disease");
    try {
        scenario.disease.validate();
    } catch (const std::exception& e) {
        fail("disease", e.what());
    }

    if (root.contains("masks")) {
        const Json& masks = root["masks"];
        if (!masks.is_object()) fail("masks", "expected an object");
        check_keys(masks, "masks", {"both_masked", "one_masked", "no_mask", "coverage"});
        scenario.masks.both_masked = number_or(masks, "both_masked", "masks", 0.6);
        scenario.masks.one_masked = number_or(masks, "one_masked", "masks", 0.8);
        scenario.masks.no_mask = number_or(masks, "no_mask", "masks", 1.0);
        scenario.masks.coverage = number_or(masks, "coverage", "masks", 1.0);
        try {
            scenario.masks.validate();
        } catch (const std::exception& e) {
            fail("masks", e.what());
        }
    }

    scenario.noncompliance = number_or(root, "noncompliance", "", 0.26);
    if (!(scenario.noncompliance >= 0.0 && scenario.noncompliance <= 1.0)) {
        fail("noncompliance", "must be in [0, 1]");
    }

    if (root.contains("init")) scenario.init = counts(root["init"], "init");

    if (root.contains("anchor_date")) {
        try {
            scenario.anchor = parse_iso_date(text(root, "anchor_date", ""));
        } catch (const std::exception& e) {
            fail("anchor_date", e.what());
        }
    }

    std::int64_t days = integer(root, "days", "");
    if (days < 1 || days > 100000) fail("days", "must be between 1 and 100000");
    scenario.days = static_cast<int>(days);

    std::int64_t replicates = integer_or(root, "replicates", "", 10);
    if (replicates < 1 || replicates > 100000) fail("replicates", "must be between 1 and 100000");
    scenario.replicates = static_cast<int>(replicates);

    scenario.seed = uinteger_or(root, "seed", "", 0);

    if (root.contains("npis")) {
        const Json& npis = root["npis"];
        if (!npis.is_array()) fail("npis", "expected an array");
        for (std::size_t i = 0; i < npis.size(); ++i) {
            scenario.npis.events.push_back(
                parse_npi(npis[i], "npis[" + std::to_string(i) + "]", scenario.anchor));
        }
        try {
            scenario.npis.validate();
        } catch (const std::exception& e) {
            fail("npis", e.what());
        }
    }

    scenario.canonical = root.dump();
    return scenario;
}

// Loads and validates a scenario file. CLI overrides are folded into the
// JSON before parsing so the provenance hash reflects what actually ran.
inline Scenario load_scenario(const std::filesystem::path& path,
                              std::optional<int> replicates_override = std::nullopt,
                              std::optional<std::uint64_t> seed_override = std::nullopt) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path.string() + ": not valid JSON: " + e.what());
    }
    if (replicates_override) root["replicates"] = *replicates_override;
    if (seed_override) root["seed"] = *seed_override;
    Scenario scenario = parse_scenario(root);
    // File references inside a scenario resolve relative to the scenario
    // file itself, not the process working directory.
    const std::filesystem::path base = path.parent_path();
    auto resolve = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = base / p;
    };
    resolve(scenario.graph.edge_list);
    resolve(scenario.graph.colocation.log);
    return scenario;
}

inline std::string scenario_hash_hex(const Scenario& scenario) {
    std::uint64_t hash = fnv1a64(scenario.canonical + "|netseir-scenario-v1");
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

// Materializes the scenario's graph. Ingest statistics are reported via
// `ingest_out` when the source is a co-location log.
inline ContactGraph build_scenario_graph(const Scenario& scenario,
                                         IngestResult* ingest_out = nullptr,
                                         ParseStats* parse_out = nullptr) {
    ContactGraph graph;
    switch (scenario.graph.kind) {
        case GraphSource::Kind::Generator: graph = generate(scenario.graph.gen); break;
        case GraphSource::Kind::EdgeList: graph = read_edge_list(scenario.graph.edge_list); break;
        case GraphSource::Kind::Colocation: {
            auto records = parse_colocation_log(scenario.graph.colocation.log, parse_out);
            IngestResult result = build_contact_graph(records, scenario.graph.colocation.spec);
            graph = std::move(result.graph);
            if (ingest_out) {
                result.graph = ContactGraph{};
                *ingest_out = std::move(result);
            }
            break;
        }
    }
    graph.set_contact_sampling_rate(scenario.graph.contact_sampling_rate);
    return graph;
}

inline CompartmentCounts scenario_init_counts(const Scenario& scenario, const ContactGraph& graph) {
    const std::uint32_t n = graph.node_count();
    if (scenario.init) {
        if (scenario.init->total() != n) {
            throw std::runtime_error("scenario field 'init': counts sum to " +
                                     std::to_string(scenario.init->total()) +
                                     " but the graph has " + std::to_string(n) + " nodes");
        }
        return *scenario.init;
    }
    if (n < 5) {
        throw std::runtime_error(
            "scenario field 'init': required for graphs with fewer than 5 nodes");
    }
    return CompartmentCounts{n - 4, 3, 1, 0};
}

struct ScenarioRun {
    CurveSet curves;
    SummaryStats summary;
    std::string hash;
};

inline RunConfig scenario_run_config(const Scenario& scenario, const ContactGraph& graph) {
    RunConfig config;
    config.disease = scenario.disease;
    config.masks = scenario.masks;
    config.init = scenario_init_counts(scenario, graph);
    config.noncompliance = scenario.noncompliance;
    config.npis = scenario.npis;
    config.days = scenario.days;
    config.seed = scenario.seed;
    return config;
}

inline ScenarioRun run_scenario(const Scenario& scenario, const ContactGraph& graph,
                                unsigned threads = 1) {
    RunConfig config = scenario_run_config(scenario, graph);
    auto replicates = run_replicates(graph, config, scenario.replicates, threads);
    ScenarioRun run;
    run.curves = reduce_replicates(std::move(replicates), graph.node_count());
    run.summary = summarize(run.curves);
    run.hash = scenario_hash_hex(scenario);
    return run;
}

inline void write_scenario_outputs(const ScenarioRun& run, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_curves_csv(run.curves, out_dir / "curves.csv", run.hash);
    write_summary_csv(run.summary, out_dir / "summary.csv", run.hash);
}

}  // namespace netseir
