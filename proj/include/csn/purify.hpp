#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"

namespace csn {

/// Degree thresholds every surviving node must meet.
struct PurifyThresholds {
    std::size_t min_out = 1;         ///< social out-links per user
    std::size_t min_in = 26;         ///< social in-links per user
    std::size_t min_user_items = 7;  ///< items collected per user
    std::size_t min_item_users = 7;  ///< collectors per item

    static constexpr PurifyThresholds epinions() { return {1, 26, 7, 7}; }
    static constexpr PurifyThresholds friendfeed() { return {1, 2, 8, 8}; }
    static constexpr PurifyThresholds none() { return {0, 0, 0, 0}; }

    friend bool operator==(const PurifyThresholds&, const PurifyThresholds&) = default;
};

/// True iff every user and item of `net` meets the thresholds.
inline bool satisfies(const CoupledNetwork& net, const PurifyThresholds& t) {
    for (UserId u = 0; u < net.user_count(); ++u) {
        if (net.out_degree(u) < t.min_out || net.in_degree(u) < t.min_in ||
            net.item_degree(u) < t.min_user_items) {
            return false;
        }
    }
    for (ItemId i = 0; i < net.item_count(); ++i) {
        if (net.collector_count(i) < t.min_item_users) {
            return false;
        }
    }
    return true;
}

/// Removes users and items violating the thresholds, repeating until no
/// violation remains (removing a node can push its neighbours below a
/// threshold). The result is the largest sub-network satisfying all four
/// predicates, re-indexed densely with original ids preserved.
/// Throws EmptyNetworkError if no user survives.
inline CoupledNetwork purify(const CoupledNetwork& net, const PurifyThresholds& t) {
    const std::size_t users = net.user_count();
    const std::size_t items = net.item_count();

    std::vector<std::size_t> out(users), in(users), owned(users), support(items);
    for (UserId u = 0; u < users; ++u) {
        out[u] = net.out_degree(u);
        in[u] = net.in_degree(u);
        owned[u] = net.item_degree(u);
    }
    for (ItemId i = 0; i < items; ++i) {
        support[i] = net.collector_count(i);
    }

    std::vector<char> user_alive(users, 1), item_alive(items, 1);
    // Entries < users are user ids; the rest are items offset by `users`.
    std::deque<std::size_t> pending;
    const auto check_user = [&](UserId u) {
        if (user_alive[u] && (out[u] < t.min_out || in[u] < t.min_in || owned[u] < t.min_user_items)) {
            user_alive[u] = 0;
            pending.push_back(u);
        }
    };
    const auto check_item = [&](ItemId i) {
        if (item_alive[i] && support[i] < t.min_item_users) {
            item_alive[i] = 0;
            pending.push_back(users + i);
        }
    };
    for (UserId u = 0; u < users; ++u) {
        check_user(u);
    }
    for (ItemId i = 0; i < items; ++i) {
        check_item(i);
    }
    if (pending.empty()) {
        return net;
    }

    while (!pending.empty()) {
        const std::size_t node = pending.front();
        pending.pop_front();
        if (node < users) {
            const auto u = static_cast<UserId>(node);
            for (const UserId v : net.following(u)) {
                --in[v];
                check_user(v);
            }
            for (const UserId w : net.followers(u)) {
                --out[w];
                check_user(w);
            }
            for (const ItemId i : net.items_of(u)) {
                --support[i];
                check_item(i);
            }
        } else {
            const auto i = static_cast<ItemId>(node - users);
            for (const UserId u : net.collectors(i)) {
                --owned[u];
                check_user(u);
            }
        }
    }

    std::vector<std::uint32_t> user_index(users, UINT32_MAX), item_index(items, UINT32_MAX);
    std::vector<std::int64_t> user_ids, item_ids;
    for (UserId u = 0; u < users; ++u) {
        if (user_alive[u]) {
            user_index[u] = static_cast<std::uint32_t>(user_ids.size());
            user_ids.push_back(net.user_ids()[u]);
        }
    }
    for (ItemId i = 0; i < items; ++i) {
        if (item_alive[i]) {
            item_index[i] = static_cast<std::uint32_t>(item_ids.size());
            item_ids.push_back(net.item_ids()[i]);
        }
    }
    if (user_ids.empty()) {
        throw EmptyNetworkError("graph-core", "purification removed every user; thresholds (" +
                                                  std::to_string(t.min_out) + ", " +
                                                  std::to_string(t.min_in) + ", " +
                                                  std::to_string(t.min_user_items) + ", " +
                                                  std::to_string(t.min_item_users) +
                                                  ") are too strict for this input");
    }

    std::vector<Edge> social, behavior;
    for (UserId u = 0; u < users; ++u) {
        if (!user_alive[u]) {
            continue;
        }
        for (const UserId v : net.following(u)) {
            if (user_alive[v]) {
                social.push_back({user_index[u], user_index[v]});
            }
        }
        for (const ItemId i : net.items_of(u)) {
            if (item_alive[i]) {
                behavior.push_back({user_index[u], item_index[i]});
            }
        }
    }
    const auto kept_users = user_ids.size();
    const auto kept_items = item_ids.size();
    return CoupledNetwork::from_edges(kept_users, kept_items, std::move(social),
                                      std::move(behavior), std::move(user_ids),
                                      std::move(item_ids));
}

}  // namespace csn
