#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csn/error.hpp"
#include "csn/evaluation.hpp"
#include "csn/parallel.hpp"
#include "csn/random.hpp"
#include "csn/recommender.hpp"
#include "csn/similarity.hpp"
#include "csn/split.hpp"

namespace csn {

enum class Metric { precision, recall, fmeasure, auc };

inline constexpr Metric all_metrics[] = {Metric::precision, Metric::recall, Metric::fmeasure,
                                         Metric::auc};

inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::precision: return "precision";
        case Metric::recall: return "recall";
        case Metric::fmeasure: return "fmeasure";
        case Metric::auc: return "auc";
    }
    return "?";
}

/// Accuracy of one (alpha, beta, L) configuration on one split.
struct EvaluationReport {
    double precision = 0.0;
    double recall = 0.0;
    double fmeasure = 0.0;
    double auc = 0.0;
    std::size_t length = 0;
    HybridParams params;
    std::uint64_t seed = 0;

    double metric(Metric m) const {
        switch (m) {
            case Metric::precision: return precision;
            case Metric::recall: return recall;
            case Metric::fmeasure: return fmeasure;
            case Metric::auc: return auc;
        }
        return 0.0;
    }
    double& metric(Metric m) {
        switch (m) {
            case Metric::precision: return precision;
            case Metric::recall: return recall;
            case Metric::fmeasure: return fmeasure;
            case Metric::auc: return auc;
        }
        return auc;
    }
};

/// Rectangular (alpha, beta) lattice plus the list lengths evaluated at
/// every point.
struct GridSpec {
    double alpha_min = 0.0;
    double alpha_max = 4.0;
    double beta_min = 0.0;
    double beta_max = 4.0;
    double step = 0.2;
    std::vector<std::size_t> lengths{10, 20, 50};

    static GridSpec single(double alpha, double beta, std::vector<std::size_t> lengths) {
        return {alpha, alpha, beta, beta, 1.0, std::move(lengths)};
    }

    void validate() const {
        if (!(step > 0.0)) {
            throw InvalidArgument("evaluation", "grid step must be positive");
        }
        if (!(alpha_min >= 0.0 && alpha_max >= alpha_min && beta_min >= 0.0 &&
              beta_max >= beta_min)) {
            throw InvalidArgument("evaluation", "grid ranges must be non-negative and ordered");
        }
        if (lengths.empty() ||
            std::any_of(lengths.begin(), lengths.end(), [](std::size_t L) { return L < 1; })) {
            throw InvalidArgument("evaluation", "grid needs list lengths >= 1");
        }
    }

    static std::vector<double> axis(double lo, double hi, double step) {
        const auto count = static_cast<std::size_t>(std::llround(std::floor((hi - lo) / step + 1e-9))) + 1;
        std::vector<double> values(count);
        for (std::size_t k = 0; k < count; ++k) {
            // Snap to 1e-12 so 0.2 * 3 prints as 0.6.
            values[k] = std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12;
        }
        return values;
    }
    std::vector<double> alphas() const { return axis(alpha_min, alpha_max, step); }
    std::vector<double> betas() const { return axis(beta_min, beta_max, step); }
    std::size_t max_length() const { return *std::max_element(lengths.begin(), lengths.end()); }
};

struct GridPoint {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<EvaluationReport> reports;  ///< one per GridSpec::lengths entry
};

struct GridResult {
    GridSpec grid;
    InfluenceKind kind = InfluenceKind::rwr;
    std::uint64_t seed = 0;
    std::vector<GridPoint> points;  ///< alpha-major, beta ascending

    std::size_t length_index(std::size_t length) const {
        const auto it = std::find(grid.lengths.begin(), grid.lengths.end(), length);
        if (it == grid.lengths.end()) {
            throw InvalidArgument("evaluation", "list length " + std::to_string(length) +
                                                    " was not part of the grid");
        }
        return static_cast<std::size_t>(it - grid.lengths.begin());
    }

    /// Best point for a metric; ties go to the first point in grid order.
    const EvaluationReport& argmax(Metric m, std::size_t length) const {
        const std::size_t li = length_index(length);
        const EvaluationReport* best = nullptr;
        for (const auto& point : points) {
            const auto& r = point.reports[li];
            if (best == nullptr || r.metric(m) > best->metric(m)) {
                best = &r;
            }
        }
        return *best;
    }
};

/// Options shared by every grid point.
struct SweepOptions {
    std::size_t auc_samples = 1000000;
    Averaging averaging = Averaging::users_with_test_items;
    bool transpose_influence = false;
    unsigned workers = 1;
};

/// Outcome of one (alpha, beta) point: lists at the longest L and one report
/// per requested L.
struct PointEvaluation {
    RecommendationList lists;
    std::vector<EvaluationReport> reports;
};

/// Scores every user once under S = p^alpha * s^beta, producing the top-L
/// lists and the AUC counts over pre-drawn samples (sorted by user).
inline PointEvaluation evaluate_point(const SplitPair& split, const PreferenceMatrix& p,
                                      const InfluenceMatrix& s, double alpha, double beta,
                                      const std::vector<std::size_t>& lengths,
                                      const std::vector<AucSample>& samples,
                                      const SweepOptions& opt) {
    const auto& train = split.train;
    const std::size_t users = train.user_count();
    const std::size_t longest = *std::max_element(lengths.begin(), lengths.end());
    const auto S = hybrid_similarity(p, s, alpha, beta);

    std::vector<std::size_t> sample_begin(users + 1, 0);
    for (const auto& smp : samples) {
        ++sample_begin[smp.user + 1];
    }
    for (std::size_t u = 0; u < users; ++u) {
        sample_begin[u + 1] += sample_begin[u];
    }

    PointEvaluation out;
    out.lists.length = longest;
    out.lists.per_user.resize(users);
    std::vector<AucCounts> counts(users);
    std::vector<char> lonely(users, 0);
    const unsigned pool = resolve_workers(opt.workers);
    std::vector<std::vector<double>> buffers(pool);
    parallel_for(users, pool, [&](std::size_t u, unsigned w) {
        auto& scores = buffers[w];
        const auto user = static_cast<UserId>(u);
        lonely[u] = score_items(train, S, user, scores) ? 0 : 1;
        if (!lonely[u]) {
            out.lists.per_user[u] = top_items(scores, train.items_of(user), longest);
        }
        const auto first = sample_begin[u];
        const auto last = sample_begin[u + 1];
        if (last > first) {
            counts[u] = count_auc(std::span(samples).subspan(first, last - first), scores);
        }
    });
    out.lists.users_without_neighbors =
        static_cast<std::size_t>(std::count(lonely.begin(), lonely.end(), 1));

    AucCounts total;
    for (const auto& c : counts) {
        total += c;
    }
    const double auc_value = samples.empty() ? 0.0 : total.value();
    for (const std::size_t L : lengths) {
        const auto acc = precision_recall_f(out.lists, split.test, L, opt.averaging);
        EvaluationReport r;
        r.precision = acc.precision;
        r.recall = acc.recall;
        r.fmeasure = acc.fmeasure;
        r.auc = auc_value;
        r.length = L;
        r.params = {alpha, beta, s.kind, s.continue_prob, L};
        r.seed = split.seed;
        out.reports.push_back(r);
    }
    return out;
}

/// Stream id used to derive the AUC sampling seed from a split seed.
inline constexpr std::uint64_t auc_stream = 0xA0C;

/// Evaluates every lattice point of `grid` on one split, reusing the
/// precomputed preference and influence matrices.
inline GridResult grid_sweep(const SplitPair& split, const PreferenceMatrix& p,
                             const InfluenceMatrix& s, const GridSpec& grid,
                             const SweepOptions& opt = {}) {
    grid.validate();
    const auto samples = opt.auc_samples > 0
                             ? draw_auc_samples(split.train, split.test, opt.auc_samples,
                                                derive_seed(split.seed, auc_stream))
                             : std::vector<AucSample>{};
    const auto influence = oriented(s, opt.transpose_influence);

    GridResult result;
    result.grid = grid;
    result.kind = s.kind;
    result.seed = split.seed;
    for (const double alpha : grid.alphas()) {
        for (const double beta : grid.betas()) {
            auto eval = evaluate_point(split, p, influence, alpha, beta, grid.lengths, samples, opt);
            result.points.push_back({alpha, beta, std::move(eval.reports)});
        }
    }
    return result;
}

/// Convenience form computing the matrices from the training network.
inline GridResult grid_sweep(const SplitPair& split, InfluenceKind kind, const GridSpec& grid,
                             const SimilarityOptions& sim = {}, const SweepOptions& opt = {}) {
    const auto p = cosine_preference(split.train, sim.workers);
    const auto s = influence(split.train, kind, sim);
    return grid_sweep(split, p, s, grid, opt);
}

/// Mean and standard error of a grid sweep repeated over several splits.
struct GridAggregate {
    GridResult mean;
    GridResult standard_error;
    std::vector<std::uint64_t> seeds;
};

inline GridAggregate aggregate(const std::vector<GridResult>& runs) {
    if (runs.empty()) {
        throw InvalidArgument("evaluation", "nothing to aggregate");
    }
    GridAggregate agg;
    agg.mean = runs.front();
    agg.standard_error = runs.front();
    const auto n = static_cast<double>(runs.size());
    for (const auto& run : runs) {
        if (run.points.size() != runs.front().points.size()) {
            throw InvalidArgument("evaluation", "grid runs have different shapes");
        }
        agg.seeds.push_back(run.seed);
    }
    for (std::size_t k = 0; k < agg.mean.points.size(); ++k) {
        for (std::size_t li = 0; li < agg.mean.points[k].reports.size(); ++li) {
            for (const Metric m : all_metrics) {
                double sum = 0.0;
                for (const auto& run : runs) {
                    sum += run.points[k].reports[li].metric(m);
                }
                const double mean = sum / n;
                double sq = 0.0;
                for (const auto& run : runs) {
                    const double d = run.points[k].reports[li].metric(m) - mean;
                    sq += d * d;
                }
                const double se = runs.size() > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
                agg.mean.points[k].reports[li].metric(m) = mean;
                agg.standard_error.points[k].reports[li].metric(m) = se;
            }
        }
    }
    return agg;
}

/// Shortest round-trippable-enough text for plot files: up to 10 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// CSV with header alpha,beta,L,metric,value. AUC does not depend on the list
/// length and is written once per point with L = 0.
inline void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << "alpha,beta,L,metric,value\n";
    for (const auto& point : grid.points) {
        const auto a = format_number(point.alpha);
        const auto b = format_number(point.beta);
        for (const auto& r : point.reports) {
            for (const Metric m : {Metric::precision, Metric::recall, Metric::fmeasure}) {
                out << a << ',' << b << ',' << r.length << ',' << to_string(m) << ','
                    << format_number(r.metric(m)) << '\n';
            }
        }
        if (!point.reports.empty()) {
            out << a << ',' << b << ",0,auc," << format_number(point.reports.front().auc) << '\n';
        }
    }
}

/// Best point per metric and list length, laid out like a results table.
inline nlohmann::ordered_json summary_json(const GridAggregate& agg) {
    const auto& mean = agg.mean;
    nlohmann::ordered_json j;
    j["kind"] = to_string(mean.kind);
    j["seeds"] = agg.seeds;
    j["grid"] = {{"alpha", {mean.grid.alpha_min, mean.grid.alpha_max}},
                 {"beta", {mean.grid.beta_min, mean.grid.beta_max}},
                 {"step", mean.grid.step},
                 {"lengths", mean.grid.lengths}};
    const auto entry = [&](Metric m, std::size_t L) {
        const auto& best = mean.argmax(m, L);
        const std::size_t li = mean.length_index(L);
        double se = 0.0;
        for (std::size_t k = 0; k < mean.points.size(); ++k) {
            if (&mean.points[k].reports[li] == &best) {
                se = agg.standard_error.points[k].reports[li].metric(m);
            }
        }
        return nlohmann::ordered_json{{"value", best.metric(m)},
                                      {"stderr", se},
                                      {"alpha", best.params.alpha},
                                      {"beta", best.params.beta}};
    };
    nlohmann::ordered_json metrics;
    for (const Metric m : {Metric::precision, Metric::recall, Metric::fmeasure}) {
        nlohmann::ordered_json per_length;
        for (const auto L : mean.grid.lengths) {
            per_length[std::to_string(L)] = entry(m, L);
        }
        metrics[std::string(to_string(m))] = per_length;
    }
    metrics["auc"] = entry(Metric::auc, mean.grid.lengths.front());
    j["metrics"] = metrics;
    return j;
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
    return {{"alpha", r.params.alpha},       {"beta", r.params.beta},
            {"kind", to_string(r.params.kind)}, {"c", r.params.continue_prob},
            {"L", r.length},                 {"seed", r.seed},
            {"precision", r.precision},      {"recall", r.recall},
            {"fmeasure", r.fmeasure},        {"auc", r.auc}};
}

}  // namespace csn
