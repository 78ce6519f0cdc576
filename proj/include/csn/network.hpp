#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csn/error.hpp"

namespace csn {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

/// Directed pair. In the social layer (follower, followee); in the behavior
/// layer (user, item).
struct Edge {
    std::uint32_t source = 0;
    std::uint32_t target = 0;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Compressed adjacency: row r owns targets[offsets[r] .. offsets[r + 1]),
/// sorted ascending.
class Adjacency {
public:
    Adjacency() : offsets_(1, 0) {}

    /// `edges` must be sorted and duplicate free.
    static Adjacency from_sorted(std::size_t rows, std::span<const Edge> edges) {
        Adjacency adj;
        adj.offsets_.assign(rows + 1, 0);
        adj.targets_.reserve(edges.size());
        for (const Edge& e : edges) {
            ++adj.offsets_[e.source + 1];
            adj.targets_.push_back(e.target);
        }
        std::partial_sum(adj.offsets_.begin(), adj.offsets_.end(), adj.offsets_.begin());
        return adj;
    }

    std::size_t rows() const noexcept { return offsets_.size() - 1; }
    std::size_t size() const noexcept { return targets_.size(); }

    std::span<const std::uint32_t> row(std::size_t r) const noexcept {
        return {targets_.data() + offsets_[r], targets_.data() + offsets_[r + 1]};
    }
    std::size_t degree(std::size_t r) const noexcept { return offsets_[r + 1] - offsets_[r]; }

    bool contains(std::size_t r, std::uint32_t target) const noexcept {
        const auto targets = row(r);
        return std::binary_search(targets.begin(), targets.end(), target);
    }

    friend bool operator==(const Adjacency&, const Adjacency&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> targets_;
};

/// Immutable two-layer network: a directed social layer over users and a
/// user-item bipartite layer, sharing one dense user index. The original ids
/// of users and items are kept alongside for output.
class CoupledNetwork {
public:
    CoupledNetwork() = default;

    /// Builds a network from dense-index edges. Throws InvalidArgument on a
    /// self-loop, a duplicate, or an out-of-range endpoint. Empty id vectors
    /// mean "original id = dense index".
    static CoupledNetwork from_edges(std::size_t users, std::size_t items,
                                     std::vector<Edge> social, std::vector<Edge> behavior,
                                     std::vector<std::int64_t> user_ids = {},
                                     std::vector<std::int64_t> item_ids = {}) {
        std::sort(social.begin(), social.end());
        std::sort(behavior.begin(), behavior.end());
        check_layer(social, users, users, "social");
        check_layer(behavior, users, items, "behavior");
        for (const Edge& e : social) {
            if (e.source == e.target) {
                throw InvalidArgument("graph-core",
                                      "self-loop on user " + std::to_string(e.source));
            }
        }
        if (user_ids.empty()) {
            user_ids.resize(users);
            std::iota(user_ids.begin(), user_ids.end(), std::int64_t{0});
        }
        if (item_ids.empty()) {
            item_ids.resize(items);
            std::iota(item_ids.begin(), item_ids.end(), std::int64_t{0});
        }
        if (user_ids.size() != users || item_ids.size() != items) {
            throw InvalidArgument("graph-core", "id map size does not match index range");
        }

        CoupledNetwork net;
        net.following_ = Adjacency::from_sorted(users, social);
        net.items_ = Adjacency::from_sorted(users, behavior);
        net.followers_ = Adjacency::from_sorted(users, reversed(social));
        net.collectors_ = Adjacency::from_sorted(items, reversed(behavior));
        net.user_ids_ = std::move(user_ids);
        net.item_ids_ = std::move(item_ids);
        return net;
    }

    std::size_t user_count() const noexcept { return following_.rows(); }
    std::size_t item_count() const noexcept { return collectors_.rows(); }
    std::size_t social_link_count() const noexcept { return following_.size(); }
    std::size_t behavior_link_count() const noexcept { return items_.size(); }

    /// Users that `u` links to (T_uj = 1).
    std::span<const UserId> following(UserId u) const noexcept { return following_.row(u); }
    /// Users linking to `u` (T_ju = 1).
    std::span<const UserId> followers(UserId u) const noexcept { return followers_.row(u); }
    std::span<const ItemId> items_of(UserId u) const noexcept { return items_.row(u); }
    std::span<const UserId> collectors(ItemId i) const noexcept { return collectors_.row(i); }

    std::size_t out_degree(UserId u) const noexcept { return following_.degree(u); }
    std::size_t in_degree(UserId u) const noexcept { return followers_.degree(u); }
    std::size_t item_degree(UserId u) const noexcept { return items_.degree(u); }
    std::size_t collector_count(ItemId i) const noexcept { return collectors_.degree(i); }

    bool links(UserId from, UserId to) const noexcept { return following_.contains(from, to); }
    bool collected(UserId u, ItemId i) const noexcept { return items_.contains(u, i); }

    std::vector<Edge> social_edges() const { return edges_of(following_); }
    std::vector<Edge> behavior_edges() const { return edges_of(items_); }

    std::span<const std::int64_t> user_ids() const noexcept { return user_ids_; }
    std::span<const std::int64_t> item_ids() const noexcept { return item_ids_; }

    /// Same user/item index spaces and social layer, different behavior layer.
    CoupledNetwork with_behavior(std::vector<Edge> behavior) const {
        return from_edges(user_count(), item_count(), social_edges(), std::move(behavior),
                          user_ids_, item_ids_);
    }

    friend bool operator==(const CoupledNetwork&, const CoupledNetwork&) = default;

private:
    static void check_layer(const std::vector<Edge>& edges, std::size_t sources,
                            std::size_t targets, const char* layer) {
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const Edge& e = edges[k];
            if (e.source >= sources || e.target >= targets) {
                throw InvalidArgument("graph-core", std::string(layer) +
                                                        " edge endpoint out of range: " +
                                                        std::to_string(e.source) + " -> " +
                                                        std::to_string(e.target));
            }
            if (k > 0 && edges[k - 1] == e) {
                throw InvalidArgument("graph-core", std::string("duplicate ") + layer +
                                                        " edge " + std::to_string(e.source) +
                                                        " -> " + std::to_string(e.target));
            }
        }
    }

    static std::vector<Edge> reversed(const std::vector<Edge>& edges) {
        std::vector<Edge> out;
        out.reserve(edges.size());
        for (const Edge& e : edges) {
            out.push_back({e.target, e.source});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static std::vector<Edge> edges_of(const Adjacency& adj) {
        std::vector<Edge> out;
        out.reserve(adj.size());
        for (std::size_t r = 0; r < adj.rows(); ++r) {
            for (const auto t : adj.row(r)) {
                out.push_back({static_cast<std::uint32_t>(r), t});
            }
        }
        return out;
    }

    Adjacency following_;
    Adjacency followers_;
    Adjacency items_;
    Adjacency collectors_;
    std::vector<std::int64_t> user_ids_;
    std::vector<std::int64_t> item_ids_;
};

/// Counts of input lines that were repaired while loading.
struct LoadReport {
    std::size_t social_lines = 0;
    std::size_t behavior_lines = 0;
    std::size_t duplicate_social = 0;
    std::size_t duplicate_behavior = 0;
    std::size_t self_loops = 0;
};

struct LoadedNetwork {
    CoupledNetwork network;
    LoadReport report;
};

namespace detail {

struct RawEdge {
    std::int64_t source;
    std::int64_t target;
    friend auto operator<=>(const RawEdge&, const RawEdge&) = default;
};

inline bool parse_id(std::string_view& rest, std::int64_t& out) {
    std::size_t start = rest.find_first_not_of(" \t\r");
    if (start == std::string_view::npos) {
        return false;
    }
    rest.remove_prefix(start);
    const char* first = rest.data();
    const char* last = rest.data() + rest.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || out < 0) {
        return false;
    }
    if (ptr != last && *ptr != '\t' && *ptr != ' ' && *ptr != '\r') {
        return false;
    }
    rest.remove_prefix(static_cast<std::size_t>(ptr - first));
    return true;
}

/// Reads "source<TAB>target" lines; '#' starts a comment line, blank lines
/// are skipped.
inline std::vector<RawEdge> read_edge_file(const std::string& path, std::size_t& lines) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("graph-core", "cannot open " + path);
    }
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view rest(line);
        const auto first = rest.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || rest[first] == '#') {
            continue;
        }
        RawEdge e{};
        if (!parse_id(rest, e.source) || !parse_id(rest, e.target)) {
            throw ParseError(path, number, "expected two non-negative integers");
        }
        if (rest.find_first_not_of(" \t\r") != std::string_view::npos) {
            throw ParseError(path, number, "trailing characters after edge");
        }
        edges.push_back(e);
    }
    lines = edges.size();
    return edges;
}

inline std::size_t sort_unique(std::vector<RawEdge>& edges) {
    std::sort(edges.begin(), edges.end());
    const auto before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return before - edges.size();
}

inline std::uint32_t dense_index(const std::vector<std::int64_t>& ids, std::int64_t id) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
}

}  // namespace detail

/// Loads a coupled network from two edge-list files. Users are the union of
/// ids across both layers; dense indices follow ascending original id.
/// Duplicate lines are dropped and self-loops in the social layer removed,
/// both counted in the report.
inline LoadedNetwork load_network(const std::string& social_path,
                                  const std::string& behavior_path) {
    LoadReport report;
    auto social = detail::read_edge_file(social_path, report.social_lines);
    auto behavior = detail::read_edge_file(behavior_path, report.behavior_lines);

    const auto loops = std::remove_if(social.begin(), social.end(),
                                      [](const detail::RawEdge& e) { return e.source == e.target; });
    report.self_loops = static_cast<std::size_t>(social.end() - loops);
    social.erase(loops, social.end());
    report.duplicate_social = detail::sort_unique(social);
    report.duplicate_behavior = detail::sort_unique(behavior);

    std::vector<std::int64_t> user_ids;
    std::vector<std::int64_t> item_ids;
    for (const auto& e : social) {
        user_ids.push_back(e.source);
        user_ids.push_back(e.target);
    }
    for (const auto& e : behavior) {
        user_ids.push_back(e.source);
        item_ids.push_back(e.target);
    }
    std::sort(user_ids.begin(), user_ids.end());
    user_ids.erase(std::unique(user_ids.begin(), user_ids.end()), user_ids.end());
    std::sort(item_ids.begin(), item_ids.end());
    item_ids.erase(std::unique(item_ids.begin(), item_ids.end()), item_ids.end());

    std::vector<Edge> dense_social;
    dense_social.reserve(social.size());
    for (const auto& e : social) {
        dense_social.push_back(
            {detail::dense_index(user_ids, e.source), detail::dense_index(user_ids, e.target)});
    }
    std::vector<Edge> dense_behavior;
    dense_behavior.reserve(behavior.size());
    for (const auto& e : behavior) {
        dense_behavior.push_back(
            {detail::dense_index(user_ids, e.source), detail::dense_index(item_ids, e.target)});
    }
    const auto users = user_ids.size();
    const auto items = item_ids.size();
    return {CoupledNetwork::from_edges(users, items, std::move(dense_social),
                                       std::move(dense_behavior), std::move(user_ids),
                                       std::move(item_ids)),
            report};
}

namespace detail {

inline void write_edges(const std::string& path, std::span<const Edge> edges,
                        std::span<const std::int64_t> source_ids,
                        std::span<const std::int64_t> target_ids) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("graph-core", "cannot write " + path);
    }
    for (const Edge& e : edges) {
        out << source_ids[e.source] << '\t' << target_ids[e.target] << '\n';
    }
    if (!out) {
        throw IoError("graph-core", "write failed for " + path);
    }
}

}  // namespace detail

/// Writes both layers as edge lists using the original ids, so the output
/// round-trips through load_network.
inline void save_network(const CoupledNetwork& net, const std::string& social_path,
                         const std::string& behavior_path) {
    detail::write_edges(social_path, net.social_edges(), net.user_ids(), net.user_ids());
    detail::write_edges(behavior_path, net.behavior_edges(), net.user_ids(), net.item_ids());
}

}  // namespace csn
