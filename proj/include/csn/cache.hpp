#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "csn/io.hpp"
#include "csn/similarity.hpp"

namespace csn {

/// Similarity matrices of one run directory, stored under cache/ and keyed
/// by a content hash of (split files, kind, c, tolerance, Tanimoto form).
class SimilarityCache {
public:
    SimilarityCache(std::filesystem::path run, std::string content_key)
        : dir_(std::move(run) / "cache"), content_key_(std::move(content_key)) {}

    std::string preference_key() const { return hex(fnv1a(content_key_ + "|cosine")); }

    std::string influence_key(InfluenceKind kind, const SimilarityOptions& opt) const {
        std::string text = content_key_ + "|" + std::string(to_string(kind));
        if (kind == InfluenceKind::rwr) {
            text += "|" + format_exact(opt.rwr.continue_prob) + "|" + format_exact(opt.rwr.tolerance) +
                    "|" + std::to_string(opt.rwr.max_iterations);
        } else {
            text += "|" + std::string(to_string(opt.tanimoto));
        }
        return hex(fnv1a(text));
    }

    std::filesystem::path preference_path() const {
        return dir_ / ("cosine-" + preference_key() + ".tsv");
    }
    std::filesystem::path influence_path(InfluenceKind kind, const SimilarityOptions& opt) const {
        return dir_ / (std::string(to_string(kind)) + "-" + influence_key(kind, opt) + ".tsv");
    }

    /// Number of matrices read from disk instead of computed.
    std::size_t hits() const { return hits_; }

    PreferenceMatrix preference(const CoupledNetwork& train, unsigned workers) {
        const auto path = preference_path();
        if (auto cached = lookup(path, preference_key())) {
            return {std::move(*cached)};
        }
        auto p = cosine_preference(train, workers);
        store(path, preference_key(), p.scores);
        return p;
    }

    InfluenceMatrix influence(const CoupledNetwork& train, InfluenceKind kind,
                              const SimilarityOptions& opt) {
        const auto key = influence_key(kind, opt);
        const auto path = influence_path(kind, opt);
        const double c = kind == InfluenceKind::rwr ? opt.rwr.continue_prob : 0.0;
        if (auto cached = lookup(path, key)) {
            return {kind, c, std::move(*cached)};
        }
        auto s = csn::influence(train, kind, opt);
        store(path, key, s.scores);
        return s;
    }

private:
    std::optional<SparseRowMatrix> lookup(const std::filesystem::path& path, const std::string& key) {
        if (!std::filesystem::exists(path)) {
            return std::nullopt;
        }
        auto file = read_triples(path);
        if (file.key != key) {
            throw StaleInputError("cli", path.string() + " carries key " + file.key +
                                             ", expected " + key);
        }
        ++hits_;
        return std::move(file.matrix);
    }

    void store(const std::filesystem::path& path, const std::string& key, const SparseRowMatrix& m) {
        std::filesystem::create_directories(dir_);
        std::ostringstream text;
        write_triples(text, m, key);
        write_file(path, text.str());
    }

    std::filesystem::path dir_;
    std::string content_key_;
    std::size_t hits_ = 0;
};

}  // namespace csn
