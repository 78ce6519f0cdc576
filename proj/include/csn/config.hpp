#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "csn/analysis.hpp"
#include "csn/error.hpp"
#include "csn/evaluation.hpp"
#include "csn/io.hpp"
#include "csn/purify.hpp"
#include "csn/similarity.hpp"
#include "csn/sweep.hpp"
#include "csn/synthgen.hpp"

namespace csn {

/// Everything that determines an experiment run. Stored as a "key = value"
/// text file next to the results; reloading it reproduces the run.
struct ExperimentConfig {
    std::string social;    ///< edge list path; empty together with `behavior` = synthetic data
    std::string behavior;
    SynthConfig synth;
    PurifyThresholds thresholds = PurifyThresholds::epinions();
    double ratio = 0.9;
    std::vector<std::uint64_t> seeds{1};
    std::vector<InfluenceKind> kinds{InfluenceKind::rwr, InfluenceKind::lin, InfluenceKind::lout};
    RwrOptions rwr;
    TanimotoForm tanimoto = TanimotoForm::rooted;
    bool transpose_influence = false;
    GridSpec grid;
    std::size_t auc_samples = 1000000;
    Averaging averaging = Averaging::users_with_test_items;
    std::size_t curve_bins = 20;
    NodeInfluence node_influence = NodeInfluence::column_sum;
    unsigned workers = 1;
    std::string out = "run";

    bool synthetic() const { return social.empty() && behavior.empty(); }

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.serialize() == b.serialize();
    }

    std::string serialize() const;
    std::string hash() const { return hex(fnv1a(serialize())); }
    static ExperimentConfig parse(std::string_view text);
};

namespace detail {

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0) out += ',';
        if constexpr (std::is_same_v<T, InfluenceKind>) {
            out += to_string(values[k]);
        } else {
            out += std::to_string(values[k]);
        }
    }
    return out;
}

inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(sep, start), text.size());
        auto part = text.substr(start, end - start);
        while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
        if (!part.empty()) parts.emplace_back(part);
        start = end + 1;
    }
    return parts;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument("cli", "bad value '" + std::string(text) + "' for " + std::string(key));
    }
    return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw InvalidArgument("cli", "bad boolean '" + std::string(text) + "' for " + std::string(key));
}

/// "lo:hi" or a single value.
inline std::pair<double, double> parse_range(std::string_view key, std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        const double v = parse_number<double>(key, text);
        return {v, v};
    }
    return {parse_number<double>(key, text.substr(0, colon)),
            parse_number<double>(key, text.substr(colon + 1))};
}

}  // namespace detail

inline std::string ExperimentConfig::serialize() const {
    std::ostringstream o;
    const auto line = [&](std::string_view key, const std::string& value) {
        o << key << " = " << value << '\n';
    };
    line("social", social);
    line("behavior", behavior);
    line("synth.users", std::to_string(synth.users));
    line("synth.items", std::to_string(synth.items));
    line("synth.mean_out_degree", format_exact(synth.mean_out_degree));
    line("synth.mean_items", format_exact(synth.mean_items));
    line("synth.copy_prob", format_exact(synth.copy_prob));
    line("synth.reciprocity", format_exact(synth.reciprocity));
    line("synth.seed", std::to_string(synth.seed));
    line("thresholds", std::to_string(thresholds.min_out) + "," + std::to_string(thresholds.min_in) +
                           "," + std::to_string(thresholds.min_user_items) + "," +
                           std::to_string(thresholds.min_item_users));
    line("ratio", format_exact(ratio));
    line("seeds", detail::join(seeds));
    line("kinds", detail::join(kinds));
    line("c", format_exact(rwr.continue_prob));
    line("tol", format_exact(rwr.tolerance));
    line("max_iters", std::to_string(rwr.max_iterations));
    line("tanimoto", std::string(to_string(tanimoto)));
    line("transpose_influence", transpose_influence ? "true" : "false");
    line("alpha", format_exact(grid.alpha_min) + ":" + format_exact(grid.alpha_max));
    line("beta", format_exact(grid.beta_min) + ":" + format_exact(grid.beta_max));
    line("step", format_exact(grid.step));
    line("L", detail::join(grid.lengths));
    line("auc_samples", std::to_string(auc_samples));
    line("strict_mean_over_all_users", averaging == Averaging::all_users ? "true" : "false");
    line("curve_bins", std::to_string(curve_bins));
    line("node_influence", std::string(to_string(node_influence)));
    line("workers", std::to_string(workers));
    line("out", out);
    return o.str();
}

inline ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    using namespace detail;
    ExperimentConfig cfg;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++number;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("config", number, "expected 'key = value'");
        }
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        while (!value.empty() && value.front() == ' ') value.remove_prefix(1);

        if (key == "social") cfg.social = value;
        else if (key == "behavior") cfg.behavior = value;
        else if (key == "synth.users") cfg.synth.users = parse_number<std::size_t>(key, value);
        else if (key == "synth.items") cfg.synth.items = parse_number<std::size_t>(key, value);
        else if (key == "synth.mean_out_degree") cfg.synth.mean_out_degree = parse_number<double>(key, value);
        else if (key == "synth.mean_items") cfg.synth.mean_items = parse_number<double>(key, value);
        else if (key == "synth.copy_prob") cfg.synth.copy_prob = parse_number<double>(key, value);
        else if (key == "synth.reciprocity") cfg.synth.reciprocity = parse_number<double>(key, value);
        else if (key == "synth.seed") cfg.synth.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "thresholds") {
            const auto parts = split_list(value);
            if (parts.size() != 4) {
                throw ParseError("config", number, "thresholds needs four values");
            }
            cfg.thresholds = {parse_number<std::size_t>(key, parts[0]),
                              parse_number<std::size_t>(key, parts[1]),
                              parse_number<std::size_t>(key, parts[2]),
                              parse_number<std::size_t>(key, parts[3])};
        } else if (key == "ratio") cfg.ratio = parse_number<double>(key, value);
        else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& s : split_list(value)) cfg.seeds.push_back(parse_number<std::uint64_t>(key, s));
        } else if (key == "kinds") {
            cfg.kinds.clear();
            for (const auto& s : split_list(value)) cfg.kinds.push_back(parse_influence_kind(s));
        } else if (key == "c") cfg.rwr.continue_prob = parse_number<double>(key, value);
        else if (key == "tol") cfg.rwr.tolerance = parse_number<double>(key, value);
        else if (key == "max_iters") cfg.rwr.max_iterations = parse_number<std::size_t>(key, value);
        else if (key == "tanimoto") cfg.tanimoto = parse_tanimoto_form(value);
        else if (key == "transpose_influence") cfg.transpose_influence = parse_bool(key, value);
        else if (key == "alpha") std::tie(cfg.grid.alpha_min, cfg.grid.alpha_max) = parse_range(key, value);
        else if (key == "beta") std::tie(cfg.grid.beta_min, cfg.grid.beta_max) = parse_range(key, value);
        else if (key == "step") cfg.grid.step = parse_number<double>(key, value);
        else if (key == "L") {
            cfg.grid.lengths.clear();
            for (const auto& s : split_list(value)) cfg.grid.lengths.push_back(parse_number<std::size_t>(key, s));
        } else if (key == "auc_samples") cfg.auc_samples = parse_number<std::size_t>(key, value);
        else if (key == "strict_mean_over_all_users")
            cfg.averaging = parse_bool(key, value) ? Averaging::all_users : Averaging::users_with_test_items;
        else if (key == "curve_bins") cfg.curve_bins = parse_number<std::size_t>(key, value);
        else if (key == "node_influence") cfg.node_influence = parse_node_influence(value);
        else if (key == "workers") cfg.workers = parse_number<unsigned>(key, value);
        else if (key == "out") cfg.out = value;
        else throw ParseError("config", number, "unknown key '" + std::string(key) + "'");
    }
    if (cfg.social.empty() != cfg.behavior.empty()) {
        throw InvalidArgument("cli", "social and behavior paths must be given together");
    }
    if (cfg.seeds.empty() || cfg.kinds.empty()) {
        throw InvalidArgument("cli", "need at least one seed and one influence kind");
    }
    cfg.grid.validate();
    return cfg;
}

}  // namespace csn
