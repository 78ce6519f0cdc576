#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/parallel.hpp"
#include "csn/sparse.hpp"

namespace csn {

enum class InfluenceKind { rwr, lin, lout };

inline std::string_view to_string(InfluenceKind kind) {
    switch (kind) {
        case InfluenceKind::rwr: return "rwr";
        case InfluenceKind::lin: return "lin";
        case InfluenceKind::lout: return "lout";
    }
    return "?";
}

inline InfluenceKind parse_influence_kind(std::string_view name) {
    if (name == "rwr") return InfluenceKind::rwr;
    if (name == "lin") return InfluenceKind::lin;
    if (name == "lout") return InfluenceKind::lout;
    throw InvalidArgument("similarity", "unknown influence kind '" + std::string(name) +
                                            "' (expected rwr, lin or lout)");
}

/// Denominator form of the neighbourhood-overlap influence.
///  - rooted:  |A&B| / (sqrt|A| + sqrt|B| - |A&B|), the form printed with the
///             method. It exceeds 1 (or turns negative) once the overlap grows
///             past (sqrt|A| + sqrt|B|) / 2; such pairs saturate at 1.
///  - classic: |A&B| / (|A| + |B| - |A&B|), the textbook Tanimoto index.
enum class TanimotoForm { rooted, classic };

inline std::string_view to_string(TanimotoForm form) {
    return form == TanimotoForm::rooted ? "rooted" : "classic";
}

inline TanimotoForm parse_tanimoto_form(std::string_view name) {
    if (name == "rooted") return TanimotoForm::rooted;
    if (name == "classic") return TanimotoForm::classic;
    throw InvalidArgument("similarity", "unknown tanimoto form '" + std::string(name) + "'");
}

/// Social influence between users. Row i holds s_i; for RWR s_ij is the
/// stationary probability of a walker restarting at i being found at j.
struct InfluenceMatrix {
    InfluenceKind kind = InfluenceKind::rwr;
    double continue_prob = 0.0;  ///< c, only meaningful for RWR
    SparseRowMatrix scores;
};

/// Symmetric cosine overlap of collected items.
struct PreferenceMatrix {
    SparseRowMatrix scores;
};

struct RwrOptions {
    double continue_prob = 0.85;  ///< probability c of following an out-link
    double tolerance = 1e-10;     ///< stop once max |s_next - s| <= tolerance
    std::size_t max_iterations = 10000;
    double drop_below = 1e-12;    ///< stored entries smaller than this are dropped
    unsigned workers = 1;
};

/// Stationary visit probabilities of a walker restarting at `source`:
/// s = c W s + (1 - c) e_source, with W_lj = 1 / k_j for every out-link j -> l.
/// Returns the dense vector.
inline std::vector<double> rwr_vector(const CoupledNetwork& net, UserId source,
                                      const RwrOptions& opt) {
    const std::size_t users = net.user_count();
    const double c = opt.continue_prob;
    std::vector<double> current(users, 0.0), next(users, 0.0);
    current[source] = 1.0;
    if (c == 0.0) {
        return current;
    }

    double residual = 0.0;
    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        next[source] = 1.0 - c;
        for (UserId j = 0; j < users; ++j) {
            const double mass = current[j];
            if (mass == 0.0) {
                continue;
            }
            const auto out = net.following(j);
            if (out.empty()) {
                throw DanglingNodeError(j);
            }
            const double share = c * mass / static_cast<double>(out.size());
            for (const UserId l : out) {
                next[l] += share;
            }
        }
        residual = 0.0;
        for (std::size_t l = 0; l < users; ++l) {
            residual = std::max(residual, std::abs(next[l] - current[l]));
        }
        current.swap(next);
        if (residual <= opt.tolerance) {
            return current;
        }
    }
    throw ConvergenceError(source, opt.max_iterations, residual);
}

inline InfluenceMatrix rwr_influence(const CoupledNetwork& net, const RwrOptions& opt = {}) {
    if (!(opt.continue_prob >= 0.0 && opt.continue_prob < 1.0)) {
        throw InvalidArgument("similarity", "RWR continue probability must lie in [0, 1)");
    }
    if (!(opt.tolerance > 0.0)) {
        throw InvalidArgument("similarity", "RWR tolerance must be positive");
    }
    const std::size_t users = net.user_count();
    std::vector<std::vector<SparseEntry>> rows(users);
    parallel_for(users, opt.workers, [&](std::size_t i, unsigned) {
        const auto s = rwr_vector(net, static_cast<UserId>(i), opt);
        auto& row = rows[i];
        for (std::size_t j = 0; j < users; ++j) {
            if (s[j] >= opt.drop_below) {
                row.push_back({static_cast<std::uint32_t>(j), s[j]});
            }
        }
    });
    return {InfluenceKind::rwr, opt.continue_prob, SparseRowMatrix::from_rows(std::move(rows))};
}

/// Overlap score given the overlap size and the two set sizes. Zero overlap
/// scores 0; a non-positive denominator with positive overlap scores 1.
inline double tanimoto(std::size_t common, std::size_t size_a, std::size_t size_b,
                       TanimotoForm form) {
    if (common == 0) {
        return 0.0;
    }
    const auto shared = static_cast<double>(common);
    double denominator = 0.0;
    if (form == TanimotoForm::rooted) {
        denominator = std::sqrt(static_cast<double>(size_a)) +
                      std::sqrt(static_cast<double>(size_b)) - shared;
    } else {
        denominator = static_cast<double>(size_a) + static_cast<double>(size_b) - shared;
    }
    if (denominator <= 0.0) {
        return 1.0;
    }
    return std::min(1.0, shared / denominator);
}

namespace detail {

/// Row-wise pairwise overlap: for user i, every user j reachable as
/// pivot(i) -> expand(k) accumulates one shared neighbour k.
template <typename Pivot, typename Expand, typename Score>
SparseRowMatrix overlap_matrix(std::size_t users, unsigned workers, Pivot pivot, Expand expand,
                               Score score) {
    std::vector<std::vector<SparseEntry>> rows(users);
    const unsigned pool = std::min<unsigned>(resolve_workers(workers),
                                             static_cast<unsigned>(std::max<std::size_t>(users, 1)));
    std::vector<std::vector<std::uint32_t>> counts(pool, std::vector<std::uint32_t>(users, 0));
    std::vector<std::vector<std::uint32_t>> touched(pool);
    parallel_for(users, pool, [&](std::size_t i, unsigned w) {
        auto& count = counts[w];
        auto& seen = touched[w];
        seen.clear();
        for (const auto k : pivot(static_cast<std::uint32_t>(i))) {
            for (const auto j : expand(k)) {
                if (count[j]++ == 0) {
                    seen.push_back(j);
                }
            }
        }
        std::sort(seen.begin(), seen.end());
        auto& row = rows[i];
        row.reserve(seen.size());
        for (const auto j : seen) {
            const double v = score(static_cast<std::uint32_t>(i), j, count[j]);
            if (v > 0.0) {
                row.push_back({j, v});
            }
            count[j] = 0;
        }
    });
    return SparseRowMatrix::from_rows(std::move(rows));
}

}  // namespace detail

/// LIN: overlap of in-neighbourhoods (common followers).
inline InfluenceMatrix lin_influence(const CoupledNetwork& net,
                                     TanimotoForm form = TanimotoForm::rooted,
                                     unsigned workers = 1) {
    auto scores = detail::overlap_matrix(
        net.user_count(), workers, [&](UserId i) { return net.followers(i); },
        [&](UserId k) { return net.following(k); },
        [&](UserId i, UserId j, std::size_t common) {
            return tanimoto(common, net.in_degree(i), net.in_degree(j), form);
        });
    return {InfluenceKind::lin, 0.0, std::move(scores)};
}

/// LOUT: overlap of out-neighbourhoods (common followees).
inline InfluenceMatrix lout_influence(const CoupledNetwork& net,
                                      TanimotoForm form = TanimotoForm::rooted,
                                      unsigned workers = 1) {
    auto scores = detail::overlap_matrix(
        net.user_count(), workers, [&](UserId i) { return net.following(i); },
        [&](UserId k) { return net.followers(k); },
        [&](UserId i, UserId j, std::size_t common) {
            return tanimoto(common, net.out_degree(i), net.out_degree(j), form);
        });
    return {InfluenceKind::lout, 0.0, std::move(scores)};
}

/// Cosine overlap of collected items: |common| / sqrt(d_i * d_j).
inline PreferenceMatrix cosine_preference(const CoupledNetwork& net, unsigned workers = 1) {
    auto scores = detail::overlap_matrix(
        net.user_count(), workers, [&](UserId i) { return net.items_of(i); },
        [&](ItemId k) { return net.collectors(k); },
        [&](UserId i, UserId j, std::size_t common) {
            // sqrt of the exact integer product keeps p_ii == 1 and p <= 1.
            const double norm = std::sqrt(static_cast<double>(net.item_degree(i)) *
                                          static_cast<double>(net.item_degree(j)));
            return static_cast<double>(common) / norm;
        });
    return {std::move(scores)};
}

struct SimilarityOptions {
    RwrOptions rwr;
    TanimotoForm tanimoto = TanimotoForm::rooted;
    unsigned workers = 1;
};

inline InfluenceMatrix influence(const CoupledNetwork& net, InfluenceKind kind,
                                 const SimilarityOptions& opt = {}) {
    switch (kind) {
        case InfluenceKind::rwr: {
            RwrOptions rwr = opt.rwr;
            rwr.workers = opt.workers;
            return rwr_influence(net, rwr);
        }
        case InfluenceKind::lin: return lin_influence(net, opt.tanimoto, opt.workers);
        case InfluenceKind::lout: return lout_influence(net, opt.tanimoto, opt.workers);
    }
    throw InvalidArgument("similarity", "unknown influence kind");
}

}  // namespace csn
