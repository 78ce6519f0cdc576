#pragma once

// Random instance generators and independent oracles shared by the unit and
// acceptance suites. Nothing here calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "csn/network.hpp"
#include "csn/random.hpp"
#include "csn/recommender.hpp"
#include "csn/sparse.hpp"

namespace csn::fixture {

/// Random digraph where every user has between 1 and max_out out-links, plus
/// a random bipartite layer where every user holds at least one item.
inline CoupledNetwork random_network(Rng& rng, std::size_t users, std::size_t items,
                                     std::size_t max_out = 4, std::size_t max_items = 6) {
    std::set<Edge> social, behavior;
    for (UserId u = 0; u < users; ++u) {
        const auto k = uniform_between(rng, 1, std::min(max_out, users - 1));
        std::set<UserId> targets;
        while (targets.size() < k) {
            const auto v = static_cast<UserId>(uniform_below(rng, users));
            if (v != u) targets.insert(v);
        }
        for (const auto v : targets) social.insert({u, v});
        const auto d = uniform_between(rng, 1, std::min(max_items, items));
        std::set<ItemId> mine;
        while (mine.size() < d) {
            mine.insert(static_cast<ItemId>(uniform_below(rng, items)));
        }
        for (const auto i : mine) behavior.insert({u, i});
    }
    return CoupledNetwork::from_edges(users, items, {social.begin(), social.end()},
                                      {behavior.begin(), behavior.end()});
}

/// Random digraph with a Hamiltonian cycle (hence strongly connected).
inline CoupledNetwork random_strongly_connected(Rng& rng, std::size_t users, std::size_t extra) {
    std::vector<UserId> order(users);
    for (UserId u = 0; u < users; ++u) order[u] = u;
    shuffle(order, rng);
    std::set<Edge> social;
    for (std::size_t k = 0; k < users; ++k) {
        social.insert({order[k], order[(k + 1) % users]});
    }
    for (std::size_t k = 0; k < extra; ++k) {
        const auto a = static_cast<UserId>(uniform_below(rng, users));
        const auto b = static_cast<UserId>(uniform_below(rng, users));
        if (a != b) social.insert({a, b});
    }
    std::vector<Edge> behavior;
    for (UserId u = 0; u < users; ++u) behavior.push_back({u, 0});
    return CoupledNetwork::from_edges(users, 1, {social.begin(), social.end()}, std::move(behavior));
}

inline CoupledNetwork reversed_social(const CoupledNetwork& net) {
    std::vector<Edge> social;
    for (const auto& e : net.social_edges()) social.push_back({e.target, e.source});
    return CoupledNetwork::from_edges(net.user_count(), net.item_count(), std::move(social),
                                      net.behavior_edges());
}

inline CoupledNetwork symmetrized_social(const CoupledNetwork& net) {
    std::set<Edge> social;
    for (const auto& e : net.social_edges()) {
        social.insert(e);
        social.insert({e.target, e.source});
    }
    return CoupledNetwork::from_edges(net.user_count(), net.item_count(),
                                      {social.begin(), social.end()}, net.behavior_edges());
}

/// Relabels user u as perm[u] in both layers.
inline CoupledNetwork permuted_users(const CoupledNetwork& net, const std::vector<UserId>& perm) {
    std::vector<Edge> social, behavior;
    for (const auto& e : net.social_edges()) social.push_back({perm[e.source], perm[e.target]});
    for (const auto& e : net.behavior_edges()) behavior.push_back({perm[e.source], e.target});
    return CoupledNetwork::from_edges(net.user_count(), net.item_count(), std::move(social),
                                      std::move(behavior));
}

inline Eigen::MatrixXd social_matrix(const CoupledNetwork& net) {
    const auto m = static_cast<Eigen::Index>(net.user_count());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (const auto& e : net.social_edges()) T(e.source, e.target) = 1.0;
    return T;
}

inline Eigen::MatrixXd behavior_matrix(const CoupledNetwork& net) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.user_count()),
                                              static_cast<Eigen::Index>(net.item_count()));
    for (const auto& e : net.behavior_edges()) R(e.source, e.target) = 1.0;
    return R;
}

/// Column j holds s_j from a direct LU solve of (I - c W) s = (1 - c) e_j,
/// W_lj = T_jl / k_j.
inline Eigen::MatrixXd dense_rwr(const CoupledNetwork& net, double c) {
    const Eigen::MatrixXd T = social_matrix(net);
    const auto m = T.rows();
    Eigen::MatrixXd W = T.transpose();
    for (Eigen::Index j = 0; j < m; ++j) {
        W.col(j) /= T.row(j).sum();
    }
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m) - c * W;
    return A.partialPivLu().solve((1.0 - c) * Eigen::MatrixXd::Identity(m, m));
}

/// Overlap index straight from the dense adjacency; `in` selects columns
/// (common in-linkers) instead of rows.
inline Eigen::MatrixXd dense_tanimoto(const CoupledNetwork& net, bool in, bool rooted) {
    Eigen::MatrixXd T = social_matrix(net);
    if (in) T.transposeInPlace();  // rows now list in-linkers
    const auto m = T.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
    const Eigen::MatrixXd common = T * T.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double num = common(i, j);
            if (num == 0.0) continue;
            const double a = T.row(i).squaredNorm();
            const double b = T.row(j).squaredNorm();
            const double den = rooted ? std::sqrt(a) + std::sqrt(b) - num : a + b - num;
            out(i, j) = den <= 0.0 ? 1.0 : std::min(1.0, num / den);
        }
    }
    return out;
}

inline Eigen::MatrixXd dense_cosine(const CoupledNetwork& net) {
    const Eigen::MatrixXd R = behavior_matrix(net);
    const Eigen::MatrixXd common = R * R.transpose();
    Eigen::MatrixXd out = common;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            const double norm = R.row(i).norm() * R.row(j).norm();
            out(i, j) = norm == 0.0 ? 0.0 : common(i, j) / norm;
        }
    }
    return out;
}

inline Eigen::MatrixXd to_dense(const SparseRowMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (const auto& e : m.row(i)) out(static_cast<Eigen::Index>(i), e.column) = e.value;
    }
    return out;
}

/// From-scratch P/R/F recount with std::set intersections.
struct Recount {
    double precision = 0.0, recall = 0.0, fmeasure = 0.0;
    std::size_t hits = 0;
};

inline Recount recount(const RecommendationList& lists, const std::vector<Edge>& test,
                       std::size_t L, bool all_users = false) {
    std::vector<std::set<ItemId>> held(lists.per_user.size());
    for (const auto& e : test) held[e.source].insert(e.target);
    Recount r;
    std::size_t users = 0;
    for (std::size_t u = 0; u < held.size(); ++u) {
        if (held[u].empty()) continue;
        ++users;
        std::set<ItemId> shown;
        for (std::size_t k = 0; k < std::min(L, lists.per_user[u].size()); ++k) {
            shown.insert(lists.per_user[u][k].item);
        }
        std::size_t hit = 0;
        for (const auto i : shown) hit += held[u].count(i);
        r.hits += hit;
        const double p = static_cast<double>(hit) / static_cast<double>(L);
        const double rc = static_cast<double>(hit) / static_cast<double>(held[u].size());
        r.precision += p;
        r.recall += rc;
        // 2PR/(P+R) rewritten as 2 hits / (L + N_p).
        r.fmeasure += 2.0 * static_cast<double>(hit) / static_cast<double>(L + held[u].size());
    }
    const double n = static_cast<double>(all_users ? held.size() : users);
    r.precision /= n;
    r.recall /= n;
    r.fmeasure /= n;
    return r;
}

}  // namespace csn::fixture
