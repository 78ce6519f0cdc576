#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/recommender.hpp"
#include "csn/similarity.hpp"
#include "csn/split.hpp"
#include "csn/sweep.hpp"

namespace csn {

struct InfluencePreferencePair {
    double influence = 0.0;
    double preference = 0.0;
};

/// (s_ij, p_ij) for every ordered pair i != j with s_ij > 0.
inline std::vector<InfluencePreferencePair> influence_preference_pairs(const InfluenceMatrix& s,
                                                                       const PreferenceMatrix& p) {
    if (s.scores.dim() != p.scores.dim()) {
        throw InvalidArgument("analysis", "influence and preference cover different users");
    }
    std::vector<InfluencePreferencePair> pairs;
    for (std::size_t i = 0; i < s.scores.dim(); ++i) {
        for (const auto& e : s.scores.row(i)) {
            if (e.column != i && e.value > 0.0) {
                pairs.push_back({e.value, p.scores.at(i, e.column)});
            }
        }
    }
    return pairs;
}

struct CurveBin {
    double lower = 0.0;
    double upper = 0.0;
    double center = 0.0;  ///< geometric midpoint
    double mean_preference = 0.0;
    std::size_t count = 0;
};

/// Mean preference per logarithmic influence bin. Empty bins are omitted.
struct CorrelationCurve {
    std::vector<CurveBin> bins;
    std::size_t total_pairs = 0;
};

inline CorrelationCurve influence_preference_curve(const InfluenceMatrix& s,
                                                   const PreferenceMatrix& p, std::size_t bins) {
    if (bins < 2) {
        throw InvalidArgument("analysis", "need at least two bins");
    }
    const auto pairs = influence_preference_pairs(s, p);
    if (pairs.empty()) {
        throw InvalidArgument("analysis", "no user pair has positive influence");
    }
    double lo = pairs.front().influence;
    double hi = lo;
    for (const auto& pr : pairs) {
        lo = std::min(lo, pr.influence);
        hi = std::max(hi, pr.influence);
    }
    const double log_lo = std::log(lo);
    const double width = (std::log(hi) - log_lo) / static_cast<double>(bins);

    std::vector<double> sums(bins, 0.0);
    std::vector<std::size_t> counts(bins, 0);
    for (const auto& pr : pairs) {
        std::size_t k = 0;
        if (width > 0.0) {
            k = static_cast<std::size_t>((std::log(pr.influence) - log_lo) / width);
            k = std::min(k, bins - 1);
        }
        sums[k] += pr.preference;
        ++counts[k];
    }

    CorrelationCurve curve;
    curve.total_pairs = pairs.size();
    for (std::size_t k = 0; k < bins; ++k) {
        if (counts[k] == 0) {
            continue;
        }
        CurveBin b;
        b.lower = std::exp(log_lo + width * static_cast<double>(k));
        b.upper = k + 1 == bins ? hi : std::exp(log_lo + width * static_cast<double>(k + 1));
        if (k == 0) {
            b.lower = lo;
        }
        b.center = std::sqrt(b.lower * b.upper);
        b.count = counts[k];
        b.mean_preference = sums[k] / static_cast<double>(counts[k]);
        curve.bins.push_back(b);
    }
    return curve;
}

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k;
        while (end + 1 < order.size() && values[order[end + 1]] == values[order[k]]) {
            ++end;
        }
        const double rank = 0.5 * static_cast<double>(k + end) + 1.0;
        for (std::size_t t = k; t <= end; ++t) {
            ranks[order[t]] = rank;
        }
        k = end + 1;
    }
    return ranks;
}

}  // namespace detail

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgument("analysis", "spearman needs two equally long samples (n >= 2)");
    }
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = rx[k] - mean;
        const double dy = ry[k] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double influence_preference_spearman(const InfluenceMatrix& s, const PreferenceMatrix& p) {
    const auto pairs = influence_preference_pairs(s, p);
    std::vector<double> x, y;
    x.reserve(pairs.size());
    y.reserve(pairs.size());
    for (const auto& pr : pairs) {
        x.push_back(pr.influence);
        y.push_back(pr.preference);
    }
    return spearman(x, y);
}

/// How a node's scalar influence is read off the pairwise matrix (diagonal
/// excluded). Symmetric metrics give the same value either way.
enum class NodeInfluence {
    column_sum,  ///< sum_i s_ij: influence j exerts on others under the row convention
    row_sum,     ///< sum_j s_ij
};

inline std::string_view to_string(NodeInfluence n) {
    return n == NodeInfluence::column_sum ? "column_sum" : "row_sum";
}

inline NodeInfluence parse_node_influence(std::string_view name) {
    if (name == "column_sum") return NodeInfluence::column_sum;
    if (name == "row_sum") return NodeInfluence::row_sum;
    throw InvalidArgument("analysis", "unknown node influence '" + std::string(name) + "'");
}

inline std::vector<double> node_influence(const InfluenceMatrix& s, NodeInfluence how) {
    std::vector<double> value(s.scores.dim(), 0.0);
    for (std::size_t i = 0; i < s.scores.dim(); ++i) {
        for (const auto& e : s.scores.row(i)) {
            if (e.column == i) {
                continue;
            }
            if (how == NodeInfluence::column_sum) {
                value[e.column] += e.value;
            } else {
                value[i] += e.value;
            }
        }
    }
    return value;
}

struct EgoNode {
    UserId user = 0;
    double influence = 0.0;
};

struct EgoEdge {
    UserId source = 0;
    UserId target = 0;
    double preference = 0.0;
};

/// The most influential user with its social neighbours and the social
/// links among them.
struct EgoNetwork {
    UserId center = 0;
    std::vector<UserId> neighbors;  ///< sorted
    std::vector<EgoNode> nodes;     ///< center first, then neighbours ascending
    std::vector<EgoEdge> edges;     ///< induced social links, sorted
};

inline EgoNetwork extract_ego(const CoupledNetwork& net, const InfluenceMatrix& s,
                              const PreferenceMatrix& p,
                              NodeInfluence how = NodeInfluence::column_sum) {
    if (s.scores.dim() == 0 || s.scores.dim() != net.user_count()) {
        throw InvalidArgument("analysis", "influence matrix does not match the network");
    }
    const auto value = node_influence(s, how);
    EgoNetwork ego;
    // max_element returns the first maximum, i.e. the lowest user id on ties.
    ego.center = static_cast<UserId>(std::max_element(value.begin(), value.end()) - value.begin());

    std::vector<UserId> around;
    for (const UserId v : net.following(ego.center)) around.push_back(v);
    for (const UserId v : net.followers(ego.center)) around.push_back(v);
    std::sort(around.begin(), around.end());
    around.erase(std::unique(around.begin(), around.end()), around.end());
    ego.neighbors = around;

    std::vector<UserId> members = around;
    members.insert(std::upper_bound(members.begin(), members.end(), ego.center), ego.center);
    ego.nodes.push_back({ego.center, value[ego.center]});
    for (const UserId v : around) {
        ego.nodes.push_back({v, value[v]});
    }
    for (const UserId a : members) {
        for (const UserId b : net.following(a)) {
            if (std::binary_search(members.begin(), members.end(), b)) {
                ego.edges.push_back({a, b, p.scores.at(a, b)});
            }
        }
    }
    return ego;
}

/// Training degrees of items that were both recommended to and held out by
/// the same user.
struct DegreeHistogram {
    std::map<std::size_t, std::size_t> counts;  ///< degree -> hits
    std::size_t total = 0;
    std::size_t low_degree_threshold = 5;
    double low_degree_share = 0.0;  ///< fraction of hits with degree <= threshold
};

inline DegreeHistogram recommended_degree_histogram(const RecommendationList& lists,
                                                    const std::vector<Edge>& test,
                                                    const CoupledNetwork& train,
                                                    std::size_t length = 0,
                                                    std::size_t low_degree_threshold = 5) {
    // length 0 means the full list length the recommender was run with.
    const std::size_t cutoff = length == 0 ? lists.length : length;
    const auto held_out = group_by_user(test, train.user_count());
    DegreeHistogram h;
    h.low_degree_threshold = low_degree_threshold;
    std::size_t low = 0;
    for (UserId u = 0; u < lists.per_user.size(); ++u) {
        const auto& list = lists.per_user[u];
        const std::size_t shown = std::min(cutoff, list.size());
        for (std::size_t k = 0; k < shown; ++k) {
            const ItemId item = list[k].item;
            if (std::binary_search(held_out[u].begin(), held_out[u].end(), item)) {
                const std::size_t degree = train.collector_count(item);
                ++h.counts[degree];
                ++h.total;
                if (degree <= low_degree_threshold) {
                    ++low;
                }
            }
        }
    }
    if (h.total == 0) {
        throw InvalidArgument("analysis", "no recommended item was recovered in the test set");
    }
    h.low_degree_share = static_cast<double>(low) / static_cast<double>(h.total);
    return h;
}

inline void write_curve_csv(std::ostream& out, const CorrelationCurve& curve) {
    out << "bin_lower,bin_upper,influence,mean_preference,pairs\n";
    for (const auto& b : curve.bins) {
        out << format_number(b.lower) << ',' << format_number(b.upper) << ','
            << format_number(b.center) << ',' << format_number(b.mean_preference) << ','
            << b.count << '\n';
    }
}

inline void write_ego_csv(std::ostream& out, const EgoNetwork& ego, const CoupledNetwork& net) {
    out << "user,role,influence\n";
    for (const auto& n : ego.nodes) {
        out << net.user_ids()[n.user] << ',' << (n.user == ego.center ? "center" : "neighbor")
            << ',' << format_number(n.influence) << '\n';
    }
}

/// Plain graph exchange text: "node <id> <role> <influence>" lines followed
/// by "edge <source> <target> <preference>" lines.
inline void write_ego_graph(std::ostream& out, const EgoNetwork& ego, const CoupledNetwork& net) {
    out << "# ego network; node <id> <role> <influence>; edge <source> <target> <preference>\n";
    for (const auto& n : ego.nodes) {
        out << "node " << net.user_ids()[n.user] << ' '
            << (n.user == ego.center ? "center" : "neighbor") << ' ' << format_number(n.influence)
            << '\n';
    }
    for (const auto& e : ego.edges) {
        out << "edge " << net.user_ids()[e.source] << ' ' << net.user_ids()[e.target] << ' '
            << format_number(e.preference) << '\n';
    }
}

inline void write_degree_csv(std::ostream& out, const DegreeHistogram& h) {
    out << "degree,count\n";
    for (const auto& [degree, count] : h.counts) {
        out << degree << ',' << count << '\n';
    }
}

}  // namespace csn
