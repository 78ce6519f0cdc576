#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csn/analysis.hpp"
#include "csn/config.hpp"
#include "csn/io.hpp"
#include "csn/network.hpp"
#include "csn/purify.hpp"
#include "csn/similarity.hpp"
#include "csn/split.hpp"
#include "csn/stats.hpp"
#include "csn/sweep.hpp"
#include "csn/synthgen.hpp"

namespace csn {

inline constexpr const char* version = "1.0.0";

/// Files produced by run_experiment, name -> content hash.
struct ExperimentOutputs {
    std::filesystem::path directory;
    std::map<std::string, std::string> files;
};

namespace detail {

class OutputWriter {
public:
    explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void put(const std::string& name, const std::string& content) {
        write_file(dir_ / name, content);
        files_[name] = hex(fnv1a(content));
    }

    const std::filesystem::path& dir() const { return dir_; }
    const std::map<std::string, std::string>& files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> files_;
};

inline std::string point_tag(double alpha, double beta) {
    return "a" + format_number(alpha) + "_b" + format_number(beta);
}

}  // namespace detail

/// Load (or generate) -> purify -> split per seed -> similarities -> grid
/// sweep per influence kind -> analyses of the first split. Every output is
/// a deterministic function of the config.
inline ExperimentOutputs run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
    detail::OutputWriter out(cfg.out);
    const auto note = [&](const std::string& msg) {
        if (log != nullptr) *log << msg << '\n';
    };

    out.put("config.cfg", cfg.serialize());

    CoupledNetwork raw;
    nlohmann::ordered_json load_info;
    if (cfg.synthetic()) {
        raw = generate(cfg.synth);
        load_info["source"] = "synthetic";
    } else {
        auto loaded = load_network(cfg.social, cfg.behavior);
        raw = std::move(loaded.network);
        load_info["source"] = "files";
        load_info["duplicate_social"] = loaded.report.duplicate_social;
        load_info["duplicate_behavior"] = loaded.report.duplicate_behavior;
        load_info["self_loops"] = loaded.report.self_loops;
    }
    note("loaded " + std::to_string(raw.user_count()) + " users, " +
         std::to_string(raw.item_count()) + " items");
    const auto net = purify(raw, cfg.thresholds);
    {
        nlohmann::ordered_json j = to_json(stats(net));
        out.put("stats.json", j.dump(2) + "\n");
        nlohmann::ordered_json r = to_json(stats(raw));
        r["load"] = load_info;
        out.put("stats_raw.json", r.dump(2) + "\n");
    }

    SimilarityOptions sim;
    sim.rwr = cfg.rwr;
    sim.tanimoto = cfg.tanimoto;
    sim.workers = cfg.workers;
    SweepOptions sweep;
    sweep.auc_samples = cfg.auc_samples;
    sweep.averaging = cfg.averaging;
    sweep.transpose_influence = cfg.transpose_influence;
    sweep.workers = cfg.workers;

    std::map<InfluenceKind, std::vector<GridResult>> runs;
    nlohmann::ordered_json analysis;
    for (std::size_t k = 0; k < cfg.seeds.size(); ++k) {
        const auto seed = cfg.seeds[k];
        const auto sp = split(net, cfg.ratio, seed);
        const auto p = cosine_preference(sp.train, cfg.workers);
        for (const auto kind : cfg.kinds) {
            note("seed " + std::to_string(seed) + ": " + std::string(to_string(kind)));
            const auto s = influence(sp.train, kind, sim);
            runs[kind].push_back(grid_sweep(sp, p, s, cfg.grid, sweep));
            if (k != 0) {
                continue;
            }

            const std::string name(to_string(kind));
            auto& entry = analysis[name];
            const auto oriented_s = oriented(s, cfg.transpose_influence);
            try {
                const auto curve = influence_preference_curve(oriented_s, p, cfg.curve_bins);
                std::ostringstream csv;
                write_curve_csv(csv, curve);
                out.put("curve_" + name + ".csv", csv.str());
                entry["spearman"] = influence_preference_spearman(oriented_s, p);
            } catch (const InvalidArgument& e) {
                entry["curve_error"] = e.what();
            }

            const auto ego = extract_ego(sp.train, oriented_s, p, cfg.node_influence);
            std::ostringstream ego_csv, ego_graph;
            write_ego_csv(ego_csv, ego, sp.train);
            write_ego_graph(ego_graph, ego, sp.train);
            out.put("ego_" + name + ".csv", ego_csv.str());
            out.put("ego_" + name + ".graph", ego_graph.str());
            entry["ego_center"] = sp.train.user_ids()[ego.center];
            entry["ego_size"] = ego.nodes.size();
            entry["node_influence"] = to_string(cfg.node_influence);

            // Pure influence, pure preference, and this split's precision optimum.
            const std::size_t L = cfg.grid.lengths.front();
            const auto& best = runs[kind].back().argmax(Metric::precision, L);
            const std::pair<double, double> points[] = {
                {0.0, 1.0}, {1.0, 0.0}, {best.params.alpha, best.params.beta}};
            const auto samples = std::vector<AucSample>{};
            for (const auto& [alpha, beta] : points) {
                const auto eval = evaluate_point(sp, p, oriented_s, alpha, beta, {L}, samples, sweep);
                const auto tag = detail::point_tag(alpha, beta);
                try {
                    const auto hist = recommended_degree_histogram(eval.lists, sp.test, sp.train, L);
                    std::ostringstream csv;
                    write_degree_csv(csv, hist);
                    out.put("degrees_" + name + "_" + tag + ".csv", csv.str());
                    entry["low_degree_share"][tag] = hist.low_degree_share;
                } catch (const InvalidArgument& e) {
                    entry["low_degree_share"][tag] = nullptr;
                }
            }
        }
    }
    out.put("analysis.json", analysis.dump(2) + "\n");

    for (const auto& [kind, results] : runs) {
        const auto agg = aggregate(results);
        const std::string name(to_string(kind));
        std::ostringstream csv;
        write_grid_csv(csv, agg.mean);
        out.put("grid_" + name + ".csv", csv.str());
        auto summary = summary_json(agg);
        summary["auc_samples"] = cfg.auc_samples;
        out.put("summary_" + name + ".json", summary.dump(2) + "\n");
    }

    nlohmann::ordered_json manifest;
    manifest["version"] = version;
    manifest["config_hash"] = cfg.hash();
    manifest["seeds"] = cfg.seeds;
    manifest["auc_samples"] = cfg.auc_samples;
    manifest["files"] = out.files();
    out.put("manifest.json", manifest.dump(2) + "\n");
    return {out.dir(), out.files()};
}

}  // namespace csn
