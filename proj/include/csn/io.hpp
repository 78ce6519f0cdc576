#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csn/error.hpp"
#include "csn/network.hpp"
#include "csn/recommender.hpp"
#include "csn/sparse.hpp"
#include "csn/split.hpp"

namespace csn {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (const unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("io", "cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
        throw IoError("io", "cannot write " + path.string());
    }
}

inline std::string file_hash(const std::filesystem::path& path) {
    return hex(fnv1a(read_file(path)));
}

inline std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// "i<TAB>j<TAB>score" lines after a "# key <key> dim <m>" header.
inline void write_triples(std::ostream& out, const SparseRowMatrix& m, std::string_view key = "-") {
    out << "# key " << key << " dim " << m.dim() << '\n';
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (const auto& e : m.row(i)) {
            out << i << '\t' << e.column << '\t' << format_exact(e.value) << '\n';
        }
    }
}

struct TripleFile {
    std::string key;
    SparseRowMatrix matrix;
};

inline TripleFile read_triples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("io", "cannot open " + path.string());
    }
    std::string line;
    std::size_t number = 1;
    std::string tag, key, dim_tag;
    std::size_t dim = 0;
    if (!std::getline(in, line)) {
        throw ParseError(path.string(), 1, "empty similarity file");
    }
    {
        std::istringstream header(line);
        if (!(header >> tag >> tag >> key >> dim_tag >> dim) || dim_tag != "dim") {
            throw ParseError(path.string(), 1, "expected '# key <key> dim <m>' header");
        }
    }
    std::vector<std::vector<SparseEntry>> rows(dim);
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::size_t i = 0;
        std::uint32_t j = 0;
        double v = 0.0;
        if (!(fields >> i >> j >> v) || i >= dim || j >= dim) {
            throw ParseError(path.string(), number, "expected 'i<TAB>j<TAB>score'");
        }
        rows[i].push_back({j, v});
    }
    return {key, SparseRowMatrix::from_rows(std::move(rows))};
}

/// "user<TAB>rank<TAB>item<TAB>score" with original ids, rank starting at 1.
inline void write_recommendations(std::ostream& out, const RecommendationList& lists,
                                  const CoupledNetwork& net) {
    out << "# user\trank\titem\tscore\n";
    for (std::size_t u = 0; u < lists.per_user.size(); ++u) {
        const auto& list = lists.per_user[u];
        for (std::size_t k = 0; k < list.size(); ++k) {
            out << net.user_ids()[u] << '\t' << k + 1 << '\t' << net.item_ids()[list[k].item]
                << '\t' << format_exact(list[k].score) << '\n';
        }
    }
}

/// A split stored on disk in dense ids, plus maps back to original ids and a
/// manifest of content hashes guarding every later stage.
namespace run_dir {

inline void write_dense_edges(const std::filesystem::path& path, const std::vector<Edge>& edges) {
    std::ostringstream out;
    for (const Edge& e : edges) {
        out << e.source << '\t' << e.target << '\n';
    }
    write_file(path, out.str());
}

inline std::vector<Edge> read_dense_edges(const std::filesystem::path& path) {
    std::size_t lines = 0;
    const auto raw = detail::read_edge_file(path.string(), lines);
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    for (const auto& e : raw) {
        edges.push_back({static_cast<std::uint32_t>(e.source), static_cast<std::uint32_t>(e.target)});
    }
    return edges;
}

inline void write_id_map(const std::filesystem::path& path, std::span<const std::int64_t> ids) {
    std::ostringstream out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        out << k << '\t' << ids[k] << '\n';
    }
    write_file(path, out.str());
}

inline std::vector<std::int64_t> read_id_map(const std::filesystem::path& path) {
    std::size_t lines = 0;
    const auto raw = detail::read_edge_file(path.string(), lines);
    std::vector<std::int64_t> ids(raw.size());
    for (const auto& e : raw) {
        if (static_cast<std::size_t>(e.source) >= ids.size()) {
            throw ParseError(path.string(), 0, "id map is not dense");
        }
        ids[static_cast<std::size_t>(e.source)] = e.target;
    }
    return ids;
}

inline constexpr const char* guarded_files[] = {"social.tsv", "train.tsv", "test.tsv",
                                                "users.map", "items.map"};

inline void save(const std::filesystem::path& dir, const SplitPair& sp, double ratio) {
    std::filesystem::create_directories(dir);
    const auto& net = sp.train;
    write_dense_edges(dir / "social.tsv", net.social_edges());
    write_dense_edges(dir / "train.tsv", net.behavior_edges());
    write_dense_edges(dir / "test.tsv", sp.test);
    write_id_map(dir / "users.map", net.user_ids());
    write_id_map(dir / "items.map", net.item_ids());
    nlohmann::ordered_json manifest;
    manifest["seed"] = sp.seed;
    manifest["ratio"] = ratio;
    manifest["users"] = net.user_count();
    manifest["items"] = net.item_count();
    for (const char* name : guarded_files) {
        manifest["files"][name] = file_hash(dir / name);
    }
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

struct Loaded {
    SplitPair split;
    std::string content_key;  ///< hash over all guarded files
};

/// Throws StaleInputError if any guarded file differs from the manifest.
inline Loaded load(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir / "manifest.json")) {
        throw StaleInputError("cli", "no manifest in " + dir.string() + " (run `split` first)");
    }
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    std::string combined;
    for (const char* name : guarded_files) {
        if (!std::filesystem::exists(dir / name)) {
            throw StaleInputError("cli", "missing stage input " + (dir / name).string());
        }
        const auto actual = file_hash(dir / name);
        if (manifest["files"].value(name, std::string{}) != actual) {
            throw StaleInputError("cli", (dir / name).string() +
                                             " does not match the hash in manifest.json");
        }
        combined += actual;
    }
    auto user_ids = read_id_map(dir / "users.map");
    auto item_ids = read_id_map(dir / "items.map");
    const auto users = user_ids.size();
    const auto items = item_ids.size();
    Loaded out;
    out.split.train = CoupledNetwork::from_edges(users, items, read_dense_edges(dir / "social.tsv"),
                                                 read_dense_edges(dir / "train.tsv"),
                                                 std::move(user_ids), std::move(item_ids));
    out.split.test = read_dense_edges(dir / "test.tsv");
    std::sort(out.split.test.begin(), out.split.test.end());
    out.split.seed = manifest.value("seed", std::uint64_t{0});
    out.content_key = hex(fnv1a(combined));
    return out;
}

}  // namespace run_dir

}  // namespace csn
