// Command-line front end: one subcommand per pipeline stage plus `run`,
// which executes a whole experiment from a config file.
//
// Exit status: 0 success, 1 module error, 2 unreadable/malformed input,
// 3 stale or missing stage input; CLI11 usage errors use CLI11's codes.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csn/csn.hpp"

namespace fs = std::filesystem;
using namespace csn;

namespace {

PurifyThresholds parse_thresholds(const std::string& text) {
    const auto parts = detail::split_list(text);
    if (parts.size() != 4) {
        throw InvalidArgument("cli", "--thresholds needs four comma-separated values");
    }
    return {detail::parse_number<std::size_t>("thresholds", parts[0]),
            detail::parse_number<std::size_t>("thresholds", parts[1]),
            detail::parse_number<std::size_t>("thresholds", parts[2]),
            detail::parse_number<std::size_t>("thresholds", parts[3])};
}

std::vector<std::size_t> parse_lengths(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& part : detail::split_list(text)) {
        out.push_back(detail::parse_number<std::size_t>("L", part));
    }
    if (out.empty()) {
        throw InvalidArgument("cli", "--L needs at least one value");
    }
    return out;
}

void emit(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    write_file(path, content);
    std::cout << "wrote " << path.string() << '\n';
}

/// Options shared by the stages that need similarity matrices.
struct SimilarityFlags {
    std::string run;
    std::string kind = "rwr";
    double c = 0.85;
    double tol = 1e-10;
    std::size_t max_iters = 10000;
    std::string tanimoto = "rooted";
    bool transpose = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--run", run, "run directory produced by `split`")->required();
        cmd->add_option("--kind", kind, "influence metric")
            ->check(CLI::IsMember({"rwr", "lin", "lout"}));
        cmd->add_option("--c", c, "RWR probability of following a link");
        cmd->add_option("--tol", tol, "RWR convergence tolerance");
        cmd->add_option("--max-iters", max_iters, "RWR iteration cap");
        cmd->add_option("--tanimoto", tanimoto, "LIN/LOUT denominator form")
            ->check(CLI::IsMember({"rooted", "classic"}));
        cmd->add_flag("--transpose-influence", transpose, "score with influence columns instead of rows");
    }

    SimilarityOptions options(unsigned workers) const {
        SimilarityOptions opt;
        opt.rwr.continue_prob = c;
        opt.rwr.tolerance = tol;
        opt.rwr.max_iterations = max_iters;
        opt.tanimoto = parse_tanimoto_form(tanimoto);
        opt.workers = workers;
        return opt;
    }
};

struct Matrices {
    SplitPair split;
    PreferenceMatrix preference;
    InfluenceMatrix influence;
};

Matrices load_matrices(const SimilarityFlags& flags, unsigned workers) {
    auto loaded = run_dir::load(flags.run);
    SimilarityCache cache(flags.run, loaded.content_key);
    const auto opt = flags.options(workers);
    Matrices m{std::move(loaded.split), {}, {}};
    m.preference = cache.preference(m.split.train, workers);
    m.influence = oriented(cache.influence(m.split.train, parse_influence_kind(flags.kind), opt),
                           flags.transpose);
    std::cerr << (cache.hits() == 2 ? "similarity cache hit\n" : "similarity computed\n");
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information filtering on coupled social networks"};
    app.require_subcommand(1);
    unsigned workers = 1;
    app.add_option("--workers", workers, "worker threads (0 = one per core)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic coupled network");
    SynthConfig synth;
    std::string synth_out;
    synth_cmd->add_option("--users", synth.users);
    synth_cmd->add_option("--items", synth.items);
    synth_cmd->add_option("--out-degree", synth.mean_out_degree, "mean social out-degree");
    synth_cmd->add_option("--items-per-user", synth.mean_items);
    synth_cmd->add_option("--rho", synth.copy_prob, "probability of copying a followee's item");
    synth_cmd->add_option("--reciprocity", synth.reciprocity);
    synth_cmd->add_option("--seed", synth.seed);
    synth_cmd->add_option("--out", synth_out, "output directory")->required();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "print dataset statistics as JSON");
    std::string social, behavior, stats_out;
    stats_cmd->add_option("--social", social)->required();
    stats_cmd->add_option("--behavior", behavior)->required();
    stats_cmd->add_option("--out", stats_out, "write JSON here instead of stdout");

    // purify
    auto* purify_cmd = app.add_subcommand("purify", "iteratively prune low-degree users and items");
    std::string thresholds = "1,26,7,7", purify_out;
    purify_cmd->add_option("--social", social)->required();
    purify_cmd->add_option("--behavior", behavior)->required();
    purify_cmd->add_option("--thresholds", thresholds, "min_out,min_in,min_user_items,min_item_users");
    purify_cmd->add_option("--out", purify_out, "output directory")->required();

    // split
    auto* split_cmd = app.add_subcommand("split", "split behavior links into a run directory");
    double ratio = 0.9;
    std::uint64_t seed = 1;
    std::string split_out;
    split_cmd->add_option("--social", social)->required();
    split_cmd->add_option("--behavior", behavior)->required();
    split_cmd->add_option("--ratio", ratio, "training fraction");
    split_cmd->add_option("--seed", seed);
    split_cmd->add_option("--out", split_out, "run directory")->required();

    // simmat
    auto* simmat_cmd = app.add_subcommand("simmat", "compute (or reuse) similarity matrices");
    SimilarityFlags sim_flags;
    sim_flags.add_to(simmat_cmd);

    // recommend
    auto* rec_cmd = app.add_subcommand("recommend", "write top-L lists");
    SimilarityFlags rec_flags;
    rec_flags.add_to(rec_cmd);
    double alpha = 1.0, beta = 1.0;
    std::size_t length = 10;
    std::string rec_out;
    rec_cmd->add_option("--alpha", alpha);
    rec_cmd->add_option("--beta", beta);
    rec_cmd->add_option("--L", length);
    rec_cmd->add_option("--out", rec_out, "output file (default <run>/recommendations.tsv)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "precision/recall/F/AUC at one (alpha, beta)");
    SimilarityFlags eval_flags;
    eval_flags.add_to(eval_cmd);
    std::string lengths = "10";
    std::size_t auc_samples = 1000000;
    bool strict_mean = false;
    eval_cmd->add_option("--alpha", alpha);
    eval_cmd->add_option("--beta", beta);
    eval_cmd->add_option("--L", lengths, "comma-separated list lengths");
    eval_cmd->add_option("--auc-samples", auc_samples);
    eval_cmd->add_flag("--strict-mean", strict_mean, "average over all users");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate an (alpha, beta) grid");
    SimilarityFlags sweep_flags;
    sweep_flags.add_to(sweep_cmd);
    std::string grid = "0:4";
    std::string alpha_range, beta_range;
    double step = 0.2;
    std::string sweep_lengths = "10,20,50";
    sweep_cmd->add_option("--grid", grid, "LO:HI range for both exponents");
    sweep_cmd->add_option("--alpha", alpha_range, "LO:HI override for alpha");
    sweep_cmd->add_option("--beta", beta_range, "LO:HI override for beta");
    sweep_cmd->add_option("--step", step);
    sweep_cmd->add_option("--L", sweep_lengths, "comma-separated list lengths");
    sweep_cmd->add_option("--auc-samples", auc_samples);
    sweep_cmd->add_flag("--strict-mean", strict_mean, "average over all users");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "correlation curve, ego network, degree histogram");
    SimilarityFlags an_flags;
    an_flags.add_to(analyze_cmd);
    bool want_ego = false, want_curve = false, want_degrees = false;
    std::size_t bins = 20;
    std::string node_influence = "column_sum";
    analyze_cmd->add_flag("--ego", want_ego);
    analyze_cmd->add_flag("--curve", want_curve);
    analyze_cmd->add_flag("--degrees", want_degrees);
    analyze_cmd->add_option("--bins", bins);
    analyze_cmd->add_option("--node-influence", node_influence)
        ->check(CLI::IsMember({"column_sum", "row_sum"}));
    analyze_cmd->add_option("--alpha", alpha);
    analyze_cmd->add_option("--beta", beta);
    analyze_cmd->add_option("--L", length);

    // run
    auto* run_cmd = app.add_subcommand("run", "run a whole experiment from a config file");
    std::string config_path, run_out;
    run_cmd->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run_out, "override the config's output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            const auto net = generate(synth);
            fs::create_directories(synth_out);
            save_network(net, (fs::path(synth_out) / "social.tsv").string(),
                         (fs::path(synth_out) / "behavior.tsv").string());
            std::cout << to_json(stats(net)).dump(2) << '\n';
        } else if (*stats_cmd) {
            const auto loaded = load_network(social, behavior);
            const auto text = to_json(stats(loaded.network)).dump(2) + "\n";
            if (stats_out.empty()) {
                std::cout << text;
            } else {
                emit(stats_out, text);
            }
        } else if (*purify_cmd) {
            const auto loaded = load_network(social, behavior);
            const auto net = purify(loaded.network, parse_thresholds(thresholds));
            fs::create_directories(purify_out);
            save_network(net, (fs::path(purify_out) / "social.tsv").string(),
                         (fs::path(purify_out) / "behavior.tsv").string());
            auto j = to_json(stats(net));
            j["self_loops_dropped"] = loaded.report.self_loops;
            j["duplicates_dropped"] = loaded.report.duplicate_social + loaded.report.duplicate_behavior;
            emit(fs::path(purify_out) / "stats.json", j.dump(2) + "\n");
        } else if (*split_cmd) {
            const auto loaded = load_network(social, behavior);
            const auto sp = split(loaded.network, ratio, seed);
            run_dir::save(split_out, sp, ratio);
            std::cout << "train " << sp.train.behavior_link_count() << ", test " << sp.test.size()
                      << " -> " << split_out << '\n';
        } else if (*simmat_cmd) {
            const auto m = load_matrices(sim_flags, workers);
            std::cout << "preference nonzeros " << m.preference.scores.nonzeros() << ", "
                      << sim_flags.kind << " nonzeros " << m.influence.scores.nonzeros() << '\n';
        } else if (*rec_cmd) {
            const auto m = load_matrices(rec_flags, workers);
            const auto S = hybrid_similarity(m.preference, m.influence, alpha, beta);
            const auto lists = recommend(m.split.train, S, length, workers);
            std::ostringstream text;
            write_recommendations(text, lists, m.split.train);
            emit(rec_out.empty() ? fs::path(rec_flags.run) / "recommendations.tsv" : fs::path(rec_out),
                 text.str());
            if (lists.users_without_neighbors > 0) {
                std::cerr << lists.users_without_neighbors << " users had no positive-similarity neighbour\n";
            }
        } else if (*eval_cmd) {
            const auto m = load_matrices(eval_flags, workers);
            SweepOptions opt;
            opt.auc_samples = auc_samples;
            opt.averaging = strict_mean ? Averaging::all_users : Averaging::users_with_test_items;
            opt.workers = workers;
            const auto samples = draw_auc_samples(m.split.train, m.split.test, auc_samples,
                                                  derive_seed(m.split.seed, auc_stream));
            const auto eval = evaluate_point(m.split, m.preference, m.influence, alpha, beta,
                                             parse_lengths(lengths), samples, opt);
            nlohmann::ordered_json j = nlohmann::ordered_json::array();
            for (const auto& r : eval.reports) {
                j.push_back(to_json(r));
            }
            std::cout << j.dump(2) << '\n';
            emit(fs::path(eval_flags.run) / ("evaluation_" + eval_flags.kind + ".json"), j.dump(2) + "\n");
        } else if (*sweep_cmd) {
            const auto m = load_matrices(sweep_flags, workers);
            GridSpec spec;
            std::tie(spec.alpha_min, spec.alpha_max) = detail::parse_range("grid", grid);
            std::tie(spec.beta_min, spec.beta_max) = detail::parse_range("grid", grid);
            if (!alpha_range.empty()) {
                std::tie(spec.alpha_min, spec.alpha_max) = detail::parse_range("alpha", alpha_range);
            }
            if (!beta_range.empty()) {
                std::tie(spec.beta_min, spec.beta_max) = detail::parse_range("beta", beta_range);
            }
            spec.step = step;
            spec.lengths = parse_lengths(sweep_lengths);
            SweepOptions opt;
            opt.auc_samples = auc_samples;
            opt.averaging = strict_mean ? Averaging::all_users : Averaging::users_with_test_items;
            opt.workers = workers;
            const auto result = grid_sweep(m.split, m.preference, m.influence, spec, opt);
            const auto agg = aggregate({result});
            std::ostringstream csv;
            write_grid_csv(csv, result);
            emit(fs::path(sweep_flags.run) / ("grid_" + sweep_flags.kind + ".csv"), csv.str());
            auto summary = summary_json(agg);
            summary["auc_samples"] = auc_samples;
            emit(fs::path(sweep_flags.run) / ("summary_" + sweep_flags.kind + ".json"),
                 summary.dump(2) + "\n");
        } else if (*analyze_cmd) {
            const auto m = load_matrices(an_flags, workers);
            const fs::path run(an_flags.run);
            if (!want_ego && !want_curve && !want_degrees) {
                want_ego = want_curve = want_degrees = true;
            }
            if (want_curve) {
                std::ostringstream csv;
                write_curve_csv(csv, influence_preference_curve(m.influence, m.preference, bins));
                emit(run / ("curve_" + an_flags.kind + ".csv"), csv.str());
            }
            if (want_ego) {
                const auto ego = extract_ego(m.split.train, m.influence, m.preference,
                                             parse_node_influence(node_influence));
                std::ostringstream csv, graph;
                write_ego_csv(csv, ego, m.split.train);
                write_ego_graph(graph, ego, m.split.train);
                emit(run / ("ego_" + an_flags.kind + ".csv"), csv.str());
                emit(run / ("ego_" + an_flags.kind + ".graph"), graph.str());
            }
            if (want_degrees) {
                const auto S = hybrid_similarity(m.preference, m.influence, alpha, beta);
                const auto lists = recommend(m.split.train, S, length, workers);
                const auto hist = recommended_degree_histogram(lists, m.split.test, m.split.train);
                std::ostringstream csv;
                write_degree_csv(csv, hist);
                emit(run / ("degrees_" + an_flags.kind + "_" + detail::point_tag(alpha, beta) + ".csv"),
                     csv.str());
                std::cout << "low-degree share " << hist.low_degree_share << '\n';
            }
        } else if (*run_cmd) {
            auto cfg = ExperimentConfig::parse(read_file(config_path));
            if (!run_out.empty()) {
                cfg.out = run_out;
            }
            if (app.get_option("--workers")->count() > 0) {
                cfg.workers = workers;
            }
            const auto outputs = run_experiment(cfg, &std::cerr);
            std::cout << "wrote " << outputs.files.size() + 1 << " files to "
                      << outputs.directory.string() << '\n';
        }
    } catch (const StaleInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
