#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/parallel.hpp"
#include "csn/random.hpp"
#include "csn/recommender.hpp"
#include "csn/split.hpp"

namespace csn {

/// Which users enter the system-wide P/R/F means.
enum class Averaging {
    users_with_test_items,  ///< divide by the number of users holding test items
    all_users,              ///< divide by m; users without test items contribute 0
};

struct UserAccuracy {
    UserId user = 0;
    std::size_t hits = 0;      ///< recovered test items in the top-L list
    std::size_t relevant = 0;  ///< test items of the user
    double precision = 0.0;
    double recall = 0.0;
    double fmeasure = 0.0;
};

struct AccuracyReport {
    double precision = 0.0;
    double recall = 0.0;
    double fmeasure = 0.0;
    std::size_t users_averaged = 0;
    std::size_t total_hits = 0;
    std::vector<UserAccuracy> per_user;  ///< users with at least one test item
};

/// Per-user precision hits/L, recall hits/relevant and their harmonic mean,
/// then averaged. Only the first L entries of each list are used.
inline AccuracyReport precision_recall_f(const RecommendationList& lists,
                                         const std::vector<Edge>& test, std::size_t length,
                                         Averaging averaging = Averaging::users_with_test_items) {
    if (test.empty()) {
        throw InvalidArgument("evaluation", "empty test set");
    }
    if (length < 1) {
        throw InvalidArgument("evaluation", "list length must be at least 1");
    }
    const std::size_t users = lists.per_user.size();
    const auto held_out = group_by_user(test, users);
    const auto L = static_cast<double>(length);

    AccuracyReport report;
    double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
    for (UserId u = 0; u < users; ++u) {
        const auto& relevant = held_out[u];
        if (relevant.empty()) {
            continue;
        }
        const auto& list = lists.per_user[u];
        const std::size_t shown = std::min(length, list.size());
        UserAccuracy acc;
        acc.user = u;
        acc.relevant = relevant.size();
        for (std::size_t k = 0; k < shown; ++k) {
            if (std::binary_search(relevant.begin(), relevant.end(), list[k].item)) {
                ++acc.hits;
            }
        }
        acc.precision = static_cast<double>(acc.hits) / L;
        acc.recall = static_cast<double>(acc.hits) / static_cast<double>(acc.relevant);
        if (acc.hits > 0) {
            acc.fmeasure = 2.0 * acc.precision * acc.recall / (acc.precision + acc.recall);
        }
        p_sum += acc.precision;
        r_sum += acc.recall;
        f_sum += acc.fmeasure;
        report.total_hits += acc.hits;
        report.per_user.push_back(acc);
    }
    report.users_averaged =
        averaging == Averaging::all_users ? users : report.per_user.size();
    const auto n = static_cast<double>(report.users_averaged);
    report.precision = p_sum / n;
    report.recall = r_sum / n;
    report.fmeasure = f_sum / n;
    return report;
}

/// One AUC draw: a held-out (user, item) pair against an item the user holds
/// in neither training nor test.
struct AucSample {
    UserId user = 0;
    ItemId positive = 0;
    ItemId negative = 0;

    friend auto operator<=>(const AucSample&, const AucSample&) = default;
};

struct AucCounts {
    std::size_t higher = 0;  ///< n'
    std::size_t ties = 0;    ///< n''
    std::size_t total = 0;   ///< n

    double value() const {
        return (static_cast<double>(higher) + 0.5 * static_cast<double>(ties)) /
               static_cast<double>(total);
    }
    AucCounts& operator+=(const AucCounts& o) {
        higher += o.higher;
        ties += o.ties;
        total += o.total;
        return *this;
    }
};

/// Draws `samples` AUC comparisons, sorted by user. Pairs whose user has no
/// eligible negative item are redrawn; throws if no user has one.
inline std::vector<AucSample> draw_auc_samples(const CoupledNetwork& train,
                                               const std::vector<Edge>& test,
                                               std::size_t samples, std::uint64_t seed) {
    if (samples < 1) {
        throw InvalidArgument("evaluation", "AUC needs at least one sample");
    }
    if (test.empty()) {
        throw InvalidArgument("evaluation", "empty test set");
    }
    const std::size_t items = train.item_count();
    const auto held_out = group_by_user(test, train.user_count());
    const auto eligible = [&](UserId u) {
        return items - train.item_degree(u) - held_out[u].size();
    };
    const bool any = std::any_of(test.begin(), test.end(),
                                 [&](const Edge& e) { return eligible(e.source) > 0; });
    if (!any) {
        throw InvalidArgument("evaluation", "no user has an item outside training and test");
    }

    Rng rng(seed);
    std::vector<AucSample> out;
    out.reserve(samples);
    while (out.size() < samples) {
        const Edge& pair = test[uniform_below(rng, test.size())];
        const UserId u = pair.source;
        if (eligible(u) == 0) {
            continue;
        }
        ItemId negative = 0;
        do {
            negative = static_cast<ItemId>(uniform_below(rng, items));
        } while (train.collected(u, negative) ||
                 std::binary_search(held_out[u].begin(), held_out[u].end(), negative));
        out.push_back({u, pair.target, negative});
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Compares scores for a run of samples sharing one user.
inline AucCounts count_auc(std::span<const AucSample> samples, const std::vector<double>& scores) {
    AucCounts counts;
    for (const auto& s : samples) {
        const double pos = scores[s.positive];
        const double neg = scores[s.negative];
        if (pos > neg) {
            ++counts.higher;
        } else if (pos == neg) {
            ++counts.ties;
        }
        ++counts.total;
    }
    return counts;
}

/// Fills the full item score vector of a user (absent items score 0).
using ScoreRowFn = std::function<void(UserId, std::vector<double>&)>;

/// Sampled AUC over pre-drawn comparisons; each user's scores are computed once.
inline AucCounts auc(const std::vector<AucSample>& samples, const ScoreRowFn& score_row) {
    AucCounts counts;
    std::vector<double> scores;
    std::size_t begin = 0;
    while (begin < samples.size()) {
        std::size_t end = begin;
        while (end < samples.size() && samples[end].user == samples[begin].user) {
            ++end;
        }
        score_row(samples[begin].user, scores);
        counts += count_auc(std::span(samples).subspan(begin, end - begin), scores);
        begin = end;
    }
    return counts;
}

inline double auc(const CoupledNetwork& train, const std::vector<Edge>& test,
                  const ScoreRowFn& score_row, std::size_t samples, std::uint64_t seed) {
    return auc(draw_auc_samples(train, test, samples, seed), score_row).value();
}

/// Expected value of the sampled estimator, computed by enumerating every
/// eligible negative of every held-out pair (ties counted as one half).
inline double auc_exact(const CoupledNetwork& train, const std::vector<Edge>& test,
                        const ScoreRowFn& score_row) {
    const auto held_out = group_by_user(test, train.user_count());
    std::vector<double> scores;
    double sum = 0.0;
    std::size_t pairs = 0;
    for (UserId u = 0; u < train.user_count(); ++u) {
        if (held_out[u].empty()) {
            continue;
        }
        score_row(u, scores);
        std::vector<double> negatives;
        for (ItemId item = 0; item < train.item_count(); ++item) {
            if (!train.collected(u, item) &&
                !std::binary_search(held_out[u].begin(), held_out[u].end(), item)) {
                negatives.push_back(scores[item]);
            }
        }
        if (negatives.empty()) {
            continue;
        }
        std::sort(negatives.begin(), negatives.end());
        for (const ItemId positive : held_out[u]) {
            const double s = scores[positive];
            const auto lower = std::lower_bound(negatives.begin(), negatives.end(), s);
            const auto upper = std::upper_bound(negatives.begin(), negatives.end(), s);
            const auto below = static_cast<double>(lower - negatives.begin());
            const auto equal = static_cast<double>(upper - lower);
            sum += (below + 0.5 * equal) / static_cast<double>(negatives.size());
            ++pairs;
        }
    }
    if (pairs == 0) {
        throw InvalidArgument("evaluation", "no user has an item outside training and test");
    }
    return sum / static_cast<double>(pairs);
}

}  // namespace csn
