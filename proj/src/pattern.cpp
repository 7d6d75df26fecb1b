#include "igpm/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace igpm {

void QueryPattern::finalize() {
    const std::size_t n = vertex_labels.size();
    if (n == 0) throw std::invalid_argument("pattern: no vertices");
    if (edges.empty()) throw std::invalid_argument("pattern: at least one edge required");
    adj.assign(n, {});
    for (auto [a, b] : edges) {
        if (a >= n || b >= n)
            throw std::invalid_argument("pattern: edge references unknown qid");
        if (a == b) throw std::invalid_argument("pattern: self-loop query edges not supported");
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    // connectivity check
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        for (auto nb : adj[q])
            if (!seen[nb]) {
                seen[nb] = true;
                ++visited;
                stack.push_back(nb);
            }
    }
    if (visited != n) throw std::invalid_argument("pattern: not connected");

    // automorphism group by brute force; patterns are tiny
    automorphisms.clear();
    std::set<std::pair<std::uint32_t, std::uint32_t>> edge_set;
    for (auto [a, b] : edges) edge_set.insert(std::minmax(a, b));
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            if (vertex_labels[i] != vertex_labels[perm[i]]) ok = false;
        for (auto [a, b] : edges) {
            if (!ok) break;
            if (!edge_set.count(std::minmax(perm[a], perm[b]))) ok = false;
        }
        if (ok) automorphisms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

std::vector<std::uint32_t> canonical_mapping(const std::vector<std::uint32_t>& mapping,
                                             const QueryPattern& pattern) {
    std::vector<std::uint32_t> best;
    std::vector<std::uint32_t> image(mapping.size());
    for (const auto& perm : pattern.automorphisms) {
        for (std::size_t q = 0; q < mapping.size(); ++q) image[q] = mapping[perm[q]];
        if (best.empty() || image < best) best = image;
    }
    return best;
}

std::vector<LabelId> QueryPattern::label_set() const {
    std::vector<LabelId> out(vertex_labels);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<BuiltinPattern> parse_builtin(std::string_view name) {
    if (name == "triangle") return BuiltinPattern::Triangle;
    if (name == "square") return BuiltinPattern::Square;
    if (name == "star5") return BuiltinPattern::Star5;
    if (name == "k4") return BuiltinPattern::K4;
    return std::nullopt;
}

const char* builtin_name(BuiltinPattern kind) {
    switch (kind) {
        case BuiltinPattern::Triangle: return "triangle";
        case BuiltinPattern::Square: return "square";
        case BuiltinPattern::Star5: return "star5";
        case BuiltinPattern::K4: return "k4";
    }
    return "?";
}

QueryPattern make_pattern(BuiltinPattern kind, LabelTable& labels) {
    QueryPattern p;
    LabelId v = labels.intern("V");
    p.name = builtin_name(kind);
    switch (kind) {
        case BuiltinPattern::Triangle:
            p.vertex_labels.assign(3, v);
            p.edges = {{0, 1}, {1, 2}, {2, 0}};
            break;
        case BuiltinPattern::Square:
            p.vertex_labels.assign(4, v);
            p.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
            break;
        case BuiltinPattern::Star5:
            p.vertex_labels.assign(5, v);
            p.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
            break;
        case BuiltinPattern::K4:
            p.vertex_labels.assign(4, v);
            p.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
            break;
    }
    p.finalize();
    return p;
}

QueryPattern load_pattern(const std::string& path, LabelTable& labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("pattern: cannot open " + path);
    nlohmann::json j;
    in >> j;

    QueryPattern p;
    p.name = "file:" + path;
    const auto& verts = j.at("vertices");
    p.vertex_labels.resize(verts.size(), kNoLabel);
    for (const auto& jv : verts) {
        std::uint32_t qid = jv.at("id").get<std::uint32_t>();
        if (qid >= p.vertex_labels.size())
            throw std::runtime_error("pattern: qids must be dense from 0");
        p.vertex_labels[qid] = labels.intern(jv.at("label").get<std::string>());
    }
    for (LabelId l : p.vertex_labels)
        if (l == kNoLabel) throw std::runtime_error("pattern: missing qid in vertex list");
    for (const auto& je : j.at("edges"))
        p.edges.emplace_back(je.at(0).get<std::uint32_t>(), je.at(1).get<std::uint32_t>());
    p.finalize();
    return p;
}

void save_pattern(const QueryPattern& pattern, const LabelTable& labels, const std::string& path) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (std::size_t q = 0; q < pattern.size(); ++q)
        j["vertices"].push_back({{"id", q}, {"label", labels.name(pattern.vertex_labels[q])}});
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : pattern.edges) j["edges"].push_back({a, b});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("pattern: cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace igpm
