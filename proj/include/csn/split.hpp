#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/random.hpp"

namespace csn {

/// Training network plus held-out (user, item) pairs. The social layer and
/// both index spaces are identical to the source network.
struct SplitPair {
    CoupledNetwork train;
    std::vector<Edge> test;  ///< sorted (user, item) pairs
    std::uint64_t seed = 0;
};

/// Number of behavior edges that go to training: floor(ratio * links).
inline std::size_t train_size(std::size_t links, double ratio) {
    // The epsilon absorbs representation error such as 0.9 * 100 = 90.00000000000001.
    return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(links) + 1e-9));
}

/// Uniform random partition of the behavior layer; deterministic per seed.
inline SplitPair split(const CoupledNetwork& net, double ratio = 0.9, std::uint64_t seed = 0) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw InvalidArgument("graph-core",
                              "split ratio must lie in (0, 1), got " + std::to_string(ratio));
    }
    auto edges = net.behavior_edges();
    Rng rng(seed);
    shuffle(edges, rng);
    const auto keep = train_size(edges.size(), ratio);

    std::vector<Edge> train(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(keep));
    std::vector<Edge> test(edges.begin() + static_cast<std::ptrdiff_t>(keep), edges.end());
    std::sort(test.begin(), test.end());
    return {net.with_behavior(std::move(train)), std::move(test), seed};
}

/// Test items grouped per user, each list sorted.
inline std::vector<std::vector<ItemId>> group_by_user(const std::vector<Edge>& pairs,
                                                      std::size_t users) {
    std::vector<std::vector<ItemId>> grouped(users);
    for (const Edge& e : pairs) {
        if (e.source >= users) {
            throw InvalidArgument("evaluation", "test pair references unknown user " +
                                                    std::to_string(e.source));
        }
        grouped[e.source].push_back(e.target);
    }
    for (auto& items : grouped) {
        std::sort(items.begin(), items.end());
    }
    return grouped;
}

}  // namespace csn
