#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/dates.hpp"
#include "netseir/graph.hpp"
#include "netseir/rng.hpp"

namespace netseir {

// One wifi-style session: a user attached to a hub over [ts_in, ts_out).
struct ColocationRecord {
    std::string connection_id;
    std::string user_id;
    std::string hub_id;
    std::int64_t ts_in = 0;
    std::int64_t ts_out = 0;
};

struct ParseStats {
    std::size_t rows = 0;       // data rows seen (header excluded)
    std::size_t parsed = 0;     // rows accepted
    std::size_t malformed = 0;  // rows skipped (bad fields or ts_out < ts_in)
    bool epoch_timestamps = false;
};

inline constexpr const char* kColocationCsvHeader = "connection_id,user_id,hub_id,ts_in,ts_out";

namespace detail {

inline std::optional<std::int64_t> parse_epoch(const std::string& token) {
    if (token.empty()) return std::nullopt;
    std::size_t start = token[0] == '-' ? 1 : 0;
    if (start == token.size()) return std::nullopt;
    for (std::size_t i = start; i < token.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) return std::nullopt;
    }
    try {
        return std::stoll(token);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

}  // namespace detail

// Reads a co-location log. Timestamps are either integer epoch seconds or
// ISO-8601; the format is auto-detected from the first data row and then
// enforced for the whole file. Malformed rows are skipped and counted, but
// more than 10% of them aborts the parse: that many bad rows means the
// wrong file, not a noisy one.
inline std::vector<ColocationRecord> parse_colocation_log(const std::filesystem::path& path,
                                                          ParseStats* stats_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open co-location log: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty co-location log: " + path.string());
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != kColocationCsvHeader) {
        throw std::runtime_error(path.string() + ": expected header '" +
                                 std::string(kColocationCsvHeader) + "'");
    }

    ParseStats stats;
    std::optional<bool> epoch_mode;
    auto parse_ts = [&](const std::string& token) -> std::optional<std::int64_t> {
        if (!epoch_mode) epoch_mode = detail::parse_epoch(token).has_value();
        if (*epoch_mode) return detail::parse_epoch(token);
        return parse_iso_timestamp(token);
    };

    std::vector<ColocationRecord> records;
    while (std::getline(in, line)) {
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++stats.rows;
        std::vector<std::string> fields = detail::split_csv_row(line);
        if (fields.size() != 5 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            ++stats.malformed;
            continue;
        }
        std::optional<std::int64_t> ts_in = parse_ts(fields[3]);
        std::optional<std::int64_t> ts_out = parse_ts(fields[4]);
        if (!ts_in || !ts_out || *ts_out < *ts_in) {
            ++stats.malformed;
            continue;
        }
        records.push_back({fields[0], fields[1], fields[2], *ts_in, *ts_out});
        ++stats.parsed;
    }
    stats.epoch_timestamps = epoch_mode.value_or(true);
    if (stats.rows == 0) throw std::runtime_error("co-location log has no data rows: " + path.string());
    if (stats.malformed * 10 > stats.rows) {
        throw std::runtime_error(path.string() + ": " + std::to_string(stats.malformed) + " of " +
                                 std::to_string(stats.rows) +
                                 " rows are malformed; this does not look like a co-location log");
    }
    if (stats_out) *stats_out = stats;
    return records;
}

// How to turn session records into a contact graph.
struct IngestSpec {
    std::int64_t window_start = 0;  // sessions with ts_in in [window_start, window_end)
    std::int64_t window_end = 0;
    std::uint32_t target_nodes = 17800;  // uniform user subsample before edge construction
    std::int64_t slack_seconds = 0;      // sessions closer than this still count as overlapping
    std::uint64_t seed = 0;

    void validate() const {
        if (!(window_start < window_end)) {
            throw std::invalid_argument("ingest window_start must precede window_end");
        }
        if (target_nodes < 1) throw std::invalid_argument("ingest target_nodes must be >= 1");
        if (slack_seconds < 0) throw std::invalid_argument("ingest slack_seconds must be >= 0");
    }
};

struct IngestResult {
    ContactGraph graph;                 // giant component, densely re-indexed
    std::vector<std::string> user_ids;  // node id -> original user id
    std::size_t users_in_window = 0;
    std::size_t users_sampled = 0;
    std::size_t nodes_before_component = 0;
    std::size_t edges_before_component = 0;
};

// Links every pair of sampled users whose sessions at a common hub
// overlap (half-open intervals: max(ts_in) < min(ts_out) + slack). Users
// are keyed by sorted id, so the result is independent of record order;
// the final graph is the giant component of the co-location graph.
inline IngestResult build_contact_graph(const std::vector<ColocationRecord>& records,
                                        const IngestSpec& spec) {
    spec.validate();
    if (records.empty()) throw std::invalid_argument("build_contact_graph: no records");

    std::vector<const ColocationRecord*> in_window;
    for (const ColocationRecord& record : records) {
        if (record.ts_in >= spec.window_start && record.ts_in < spec.window_end) {
            in_window.push_back(&record);
        }
    }
    std::vector<std::string> users;
    for (const ColocationRecord* record : in_window) users.push_back(record->user_id);
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    if (users.empty()) {
        throw std::invalid_argument("build_contact_graph: no users inside the window");
    }

    IngestResult result;
    result.users_in_window = users.size();
    if (users.size() > spec.target_nodes) {
        Rng rng(spec.seed);
        rng.partial_shuffle(users, spec.target_nodes);
        users.resize(spec.target_nodes);
        std::sort(users.begin(), users.end());
    }
    result.users_sampled = users.size();

    std::map<std::string, NodeId> node_of;
    for (NodeId id = 0; id < users.size(); ++id) node_of[users[id]] = id;

    struct Session {
        std::int64_t ts_in;
        std::int64_t ts_out;
        NodeId node;
    };
    std::map<std::string, std::vector<Session>> by_hub;
    for (const ColocationRecord* record : in_window) {
        auto it = node_of.find(record->user_id);
        if (it == node_of.end()) continue;
        by_hub[record->hub_id].push_back({record->ts_in, record->ts_out, it->second});
    }

    ContactGraph graph(static_cast<NodeId>(users.size()));
    std::vector<Session> active;
    for (auto& [hub, sessions] : by_hub) {
        std::sort(sessions.begin(), sessions.end(), [](const Session& a, const Session& b) {
            if (a.ts_in != b.ts_in) return a.ts_in < b.ts_in;
            if (a.ts_out != b.ts_out) return a.ts_out < b.ts_out;
            return a.node < b.node;
        });
        active.clear();
        for (const Session& session : sessions) {
            std::erase_if(active, [&](const Session& other) {
                return other.ts_out + spec.slack_seconds <= session.ts_in;
            });
            // A zero-length session is an empty interval: under zero slack
            // it overlaps nothing, though it still enters the active set so
            // a later session within slack can reach it.
            if (session.ts_in < session.ts_out + spec.slack_seconds) {
                for (const Session& other : active) {
                    if (other.node != session.node) graph.add_edge(other.node, session.node);
                }
            }
            active.push_back(session);
        }
    }
    result.nodes_before_component = graph.node_count();
    result.edges_before_component = graph.edge_count();

    std::vector<NodeId> original;
    result.graph = graph.giant_component(&original);
    result.user_ids.reserve(original.size());
    for (NodeId id : original) result.user_ids.push_back(users[id]);
    return result;
}

}  // namespace netseir
