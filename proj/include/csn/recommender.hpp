#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/parallel.hpp"
#include "csn/similarity.hpp"
#include "csn/sparse.hpp"

namespace csn {

/// Exponents and influence choice for S_ij = p_ij^alpha * s_ij^beta.
struct HybridParams {
    double alpha = 1.0;  ///< exponent on preference
    double beta = 1.0;   ///< exponent on influence
    InfluenceKind kind = InfluenceKind::rwr;
    double continue_prob = 0.85;
    std::size_t length = 10;  ///< L

    void validate() const {
        if (!(alpha >= 0.0) || !(beta >= 0.0)) {
            throw InvalidArgument("recommender", "exponents must be non-negative");
        }
        if (length < 1) {
            throw InvalidArgument("recommender", "list length must be at least 1");
        }
    }
};

/// Final user-user similarity fed to collaborative filtering.
struct SimilarityMatrix {
    SparseRowMatrix scores;
};

/// x^e with x^0 = 1 for every x >= 0, 0^0 included.
inline double power(double x, double e) {
    if (e == 0.0) {
        return 1.0;
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (e == 1.0) {
        return x;
    }
    return std::pow(x, e);
}

/// S_ij = p_ij^alpha * s_ij^beta over every user pair. Because x^0 = 1, an
/// exponent of zero makes the other factor alone decide the sparsity
/// pattern, and alpha = beta = 0 yields the all-ones matrix.
inline SimilarityMatrix hybrid_similarity(const PreferenceMatrix& p, const InfluenceMatrix& s,
                                          double alpha, double beta) {
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw InvalidArgument("recommender", "exponents must be non-negative");
    }
    const std::size_t users = p.scores.dim();
    if (s.scores.dim() != users) {
        throw InvalidArgument("recommender", "preference and influence cover different users");
    }
    std::vector<std::vector<SparseEntry>> rows(users);
    for (std::size_t i = 0; i < users; ++i) {
        auto& row = rows[i];
        const auto pref = p.scores.row(i);
        const auto infl = s.scores.row(i);
        if (alpha == 0.0 && beta == 0.0) {
            row.reserve(users);
            for (std::size_t j = 0; j < users; ++j) {
                row.push_back({static_cast<std::uint32_t>(j), 1.0});
            }
        } else if (alpha == 0.0) {
            for (const auto& e : infl) {
                if (e.value > 0.0) {
                    row.push_back({e.column, power(e.value, beta)});
                }
            }
        } else if (beta == 0.0) {
            for (const auto& e : pref) {
                if (e.value > 0.0) {
                    row.push_back({e.column, power(e.value, alpha)});
                }
            }
        } else {
            auto a = pref.begin();
            auto b = infl.begin();
            while (a != pref.end() && b != infl.end()) {
                if (a->column < b->column) {
                    ++a;
                } else if (b->column < a->column) {
                    ++b;
                } else {
                    const double v = power(a->value, alpha) * power(b->value, beta);
                    if (v > 0.0) {
                        row.push_back({a->column, v});
                    }
                    ++a;
                    ++b;
                }
            }
        }
    }
    return {SparseRowMatrix::from_rows(std::move(rows))};
}

struct Recommendation {
    ItemId item = 0;
    double score = 0.0;

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Ranked top-L items per user.
struct RecommendationList {
    std::size_t length = 0;
    std::vector<std::vector<Recommendation>> per_user;
    std::size_t users_without_neighbors = 0;

    friend bool operator==(const RecommendationList&, const RecommendationList&) = default;
};

/// v_uj = sum over l != u of S_ul * R_lj, written into `scores` (resized to
/// the item count). Returns false if u has no positive-similarity neighbour.
inline bool score_items(const CoupledNetwork& train, const SimilarityMatrix& S, UserId u,
                        std::vector<double>& scores) {
    scores.assign(train.item_count(), 0.0);
    bool any = false;
    for (const auto& e : S.scores.row(u)) {
        if (e.column == u || !(e.value > 0.0)) {
            continue;
        }
        any = true;
        for (const ItemId item : train.items_of(e.column)) {
            scores[item] += e.value;
        }
    }
    return any;
}

/// Top `length` positive-score items not in `owned` (sorted), by descending
/// score then ascending item id.
inline std::vector<Recommendation> top_items(const std::vector<double>& scores,
                                             std::span<const ItemId> owned, std::size_t length) {
    std::vector<Recommendation> candidates;
    auto next_owned = owned.begin();
    for (ItemId item = 0; item < scores.size(); ++item) {
        while (next_owned != owned.end() && *next_owned < item) {
            ++next_owned;
        }
        if (next_owned != owned.end() && *next_owned == item) {
            continue;
        }
        if (scores[item] > 0.0) {
            candidates.push_back({item, scores[item]});
        }
    }
    const auto better = [](const Recommendation& a, const Recommendation& b) {
        return a.score != b.score ? a.score > b.score : a.item < b.item;
    };
    if (candidates.size() > length) {
        std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(length),
                         candidates.end(), better);
        candidates.resize(length);
    }
    std::sort(candidates.begin(), candidates.end(), better);
    return candidates;
}

/// User-based collaborative filtering over all other users.
inline RecommendationList recommend(const CoupledNetwork& train, const SimilarityMatrix& S,
                                    std::size_t length, unsigned workers = 1) {
    if (length < 1) {
        throw InvalidArgument("recommender", "list length must be at least 1");
    }
    if (S.scores.dim() != train.user_count()) {
        throw InvalidArgument("recommender", "similarity matrix does not match the network");
    }
    const std::size_t users = train.user_count();
    RecommendationList out;
    out.length = length;
    out.per_user.resize(users);
    std::vector<char> lonely(users, 0);
    const unsigned pool = resolve_workers(workers);
    std::vector<std::vector<double>> buffers(pool);
    parallel_for(users, pool, [&](std::size_t u, unsigned w) {
        auto& scores = buffers[w];
        if (!score_items(train, S, static_cast<UserId>(u), scores)) {
            lonely[u] = 1;
            return;
        }
        out.per_user[u] = top_items(scores, train.items_of(static_cast<UserId>(u)), length);
    });
    out.users_without_neighbors = static_cast<std::size_t>(std::count(lonely.begin(), lonely.end(), 1));
    return out;
}

/// Influence rows as used for scoring; `transpose` switches to columns.
inline InfluenceMatrix oriented(const InfluenceMatrix& s, bool transpose) {
    if (!transpose) {
        return s;
    }
    return {s.kind, s.continue_prob, s.scores.transposed()};
}

}  // namespace csn
