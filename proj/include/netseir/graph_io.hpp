#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "netseir/graph.hpp"
#include "netseir/util.hpp"

namespace netseir {

struct EdgeListStats {
    std::size_t lines = 0;
    std::size_t edges_added = 0;
    std::size_t duplicates = 0;
    std::size_t self_loops = 0;
};

namespace detail {

inline bool parse_u32(std::string_view token, std::uint32_t& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

}  // namespace detail

// Edge-list format: one edge per line as two whitespace-separated
// non-negative integers; '#' starts a comment line. Duplicate edges and
// self-loops are dropped and counted in the stats rather than failing.
inline ContactGraph read_edge_list(const std::filesystem::path& path,
                                   EdgeListStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());

    std::vector<Edge> edges;
    NodeId max_node = 0;
    EdgeListStats local;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        std::istringstream fields{std::string(view)};
        std::string a, b, extra;
        if (!(fields >> a)) continue;  // blank or comment-only line
        ++local.lines;
        std::uint32_t u = 0, v = 0;
        if (!(fields >> b) || (fields >> extra) || !detail::parse_u32(a, u) || !detail::parse_u32(b, v)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected two non-negative integers");
        }
        if (u == v) {
            ++local.self_loops;
            continue;
        }
        edges.push_back(canonical_edge(u, v));
        max_node = std::max({max_node, u, v});
    }
    ContactGraph g(edges.empty() ? 0 : max_node + 1);
    for (const auto& [u, v] : edges) {
        if (g.has_edge(u, v)) {
            ++local.duplicates;
        } else {
            g.add_edge(u, v);
            ++local.edges_added;
        }
    }
    if (stats) *stats = local;
    return g;
}

// Sorted canonical order, so identical edge sets export byte-identically.
inline void write_edge_list(const ContactGraph& g, const std::filesystem::path& path) {
    std::string out;
    out.reserve(g.edge_count() * 12);
    for (const auto& [u, v] : g.active_edges()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    atomic_write_file(path, out);
}

}  // namespace netseir
