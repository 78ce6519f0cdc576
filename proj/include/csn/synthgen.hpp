#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/random.hpp"

namespace csn {

/// Parameters of the synthetic coupled-network generator.
struct SynthConfig {
    std::size_t users = 500;
    std::size_t items = 1000;
    double mean_out_degree = 8.0;
    double mean_items = 20.0;
    /// Probability that an item draw copies from a random followee's
    /// collection instead of picking uniformly; couples the two layers.
    double copy_prob = 0.5;
    /// Probability that a new link j -> t is answered with t -> j.
    double reciprocity = 0.2;
    std::uint64_t seed = 1;

    void validate() const {
        if (users < 2 || items < 1) {
            throw InvalidArgument("synthgen", "need at least two users and one item");
        }
        if (!(mean_out_degree >= 1.0) || mean_out_degree > static_cast<double>(users - 1)) {
            throw InvalidArgument("synthgen", "mean out-degree must lie in [1, users - 1]");
        }
        if (!(mean_items >= 1.0)) {
            throw InvalidArgument("synthgen", "mean items per user must be at least 1");
        }
        if (mean_items > static_cast<double>(items)) {
            throw InvalidArgument("synthgen", "more distinct items per user demanded than exist");
        }
        if (!(copy_prob >= 0.0 && copy_prob <= 1.0) || !(reciprocity >= 0.0 && reciprocity <= 1.0)) {
            throw InvalidArgument("synthgen", "probabilities must lie in [0, 1]");
        }
    }
};

namespace detail {

/// Integer spread uniformly over [mean/2, 3*mean/2] (so its mean is close to
/// `mean`), clamped to [1, cap].
inline std::size_t spread_count(Rng& rng, double mean, std::size_t cap) {
    const auto lo = static_cast<std::uint64_t>(std::max(1.0, std::ceil(mean / 2.0)));
    const auto hi = std::max(lo, static_cast<std::uint64_t>(std::floor(mean * 1.5)));
    return std::clamp<std::size_t>(uniform_between(rng, lo, hi), 1, cap);
}

}  // namespace detail

/// Grows a directed social layer by preferential attachment (each newcomer
/// links to earlier users with probability proportional to in-degree + 1),
/// then lets users collect items in index order, copying from followees with
/// probability copy_prob. Items nobody collected are dropped, so the result
/// may hold fewer than `items` items; original item ids are the generator's
/// item indices.
inline CoupledNetwork generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t m = cfg.users;

    std::vector<std::vector<UserId>> following(m);
    // Each user appears in_degree + 1 times.
    std::vector<UserId> pool;
    pool.reserve(m * static_cast<std::size_t>(cfg.mean_out_degree * 2.0 + 2.0));
    const auto add_link = [&](UserId from, UserId to) {
        auto& out = following[from];
        if (from == to || std::find(out.begin(), out.end(), to) != out.end()) {
            return false;
        }
        out.push_back(to);
        pool.push_back(to);
        return true;
    };
    const auto pick_links = [&](UserId from, std::size_t want, std::size_t candidates) {
        want = std::min(want, candidates);
        std::size_t attempts = 0;
        while (following[from].size() < want && attempts < 64 * want) {
            ++attempts;
            const UserId to = pool[uniform_below(rng, pool.size())];
            if (add_link(from, to) && uniform01(rng) < cfg.reciprocity) {
                add_link(to, from);
            }
        }
        // Dense fallback keeps out-degree >= 1 even with a skewed pool.
        for (UserId to = 0; following[from].empty() && to < m; ++to) {
            add_link(from, to);
        }
    };

    pool.push_back(0);
    for (UserId t = 1; t < m; ++t) {
        const std::size_t want = detail::spread_count(rng, cfg.mean_out_degree, m - 1);
        pick_links(t, want, t);
        pool.push_back(t);
    }
    if (following[0].empty()) {
        pick_links(0, detail::spread_count(rng, cfg.mean_out_degree, m - 1), m - 1);
    }

    std::vector<std::vector<ItemId>> owned(m);
    const auto has = [&](UserId u, ItemId i) {
        return std::find(owned[u].begin(), owned[u].end(), i) != owned[u].end();
    };
    for (UserId u = 0; u < m; ++u) {
        const std::size_t want = detail::spread_count(rng, cfg.mean_items, cfg.items);
        while (owned[u].size() < want) {
            ItemId item = 0;
            bool copied = false;
            if (uniform01(rng) < cfg.copy_prob) {
                const auto& out = following[u];
                const UserId f = out[uniform_below(rng, out.size())];
                if (!owned[f].empty()) {
                    item = owned[f][uniform_below(rng, owned[f].size())];
                    copied = !has(u, item);
                }
            }
            if (!copied) {
                do {
                    item = static_cast<ItemId>(uniform_below(rng, cfg.items));
                } while (has(u, item));
            }
            owned[u].push_back(item);
        }
    }

    std::vector<std::uint32_t> dense(cfg.items, UINT32_MAX);
    for (const auto& list : owned) {
        for (const ItemId i : list) {
            dense[i] = 0;
        }
    }
    std::vector<std::int64_t> item_ids;
    for (ItemId i = 0; i < cfg.items; ++i) {
        if (dense[i] == 0) {
            dense[i] = static_cast<std::uint32_t>(item_ids.size());
            item_ids.push_back(i);
        }
    }

    std::vector<Edge> social, behavior;
    for (UserId u = 0; u < m; ++u) {
        for (const UserId v : following[u]) {
            social.push_back({u, v});
        }
        for (const ItemId i : owned[u]) {
            behavior.push_back({u, dense[i]});
        }
    }
    const auto n = item_ids.size();
    return CoupledNetwork::from_edges(m, n, std::move(social), std::move(behavior), {},
                                      std::move(item_ids));
}

}  // namespace csn
