#pragma once

#include <cstddef>

#include <json.hpp>

#include "csn/network.hpp"

namespace csn {

/// Size and sparsity summary of a coupled network.
struct DatasetStats {
    std::size_t user_count = 0;
    std::size_t item_count = 0;
    std::size_t rating_count = 0;       ///< behavior links
    std::size_t social_link_count = 0;  ///< directed social links
    double rating_sparsity = 0.0;       ///< links / (users * items)
    double social_sparsity = 0.0;       ///< links / (users * (users - 1))
};

inline DatasetStats stats(const CoupledNetwork& net) {
    DatasetStats s;
    s.user_count = net.user_count();
    s.item_count = net.item_count();
    s.rating_count = net.behavior_link_count();
    s.social_link_count = net.social_link_count();
    const auto users = static_cast<double>(s.user_count);
    const auto items = static_cast<double>(s.item_count);
    if (s.user_count > 0 && s.item_count > 0) {
        s.rating_sparsity = static_cast<double>(s.rating_count) / (users * items);
    }
    if (s.user_count > 1) {
        s.social_sparsity = static_cast<double>(s.social_link_count) / (users * (users - 1.0));
    }
    return s;
}

inline nlohmann::ordered_json to_json(const DatasetStats& s) {
    return {{"user_count", s.user_count},
            {"item_count", s.item_count},
            {"rating_count", s.rating_count},
            {"social_link_count", s.social_link_count},
            {"rating_sparsity", s.rating_sparsity},
            {"social_sparsity", s.social_sparsity}};
}

}  // namespace csn
