#include "igpm/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace igpm {

bool OracleResult::contains(const std::vector<VertexId>& mapping,
                            const QueryPattern& pattern) const {
    auto canon = canonical_mapping(mapping, pattern);
    return std::binary_search(embeddings.begin(), embeddings.end(), canon);
}

OracleResult brute_force_embeddings(const TemporalGraph& g, const QueryPattern& pattern,
                                    std::size_t vertex_cap) {
    if (g.num_vertices() > vertex_cap)
        throw std::runtime_error("brute_force_embeddings: graph exceeds oracle cap of " +
                                 std::to_string(vertex_cap) + " vertices");
    if (pattern.size() > 6)
        throw std::runtime_error("brute_force_embeddings: pattern exceeds 6 vertices");

    const std::size_t nq = pattern.size();

    // order query vertices so each (after the first) has a mapped neighbor:
    // BFS from qid 0, higher-degree first within a level
    std::vector<std::uint32_t> order;
    {
        std::vector<bool> seen(nq, false);
        std::vector<std::uint32_t> frontier{0};
        seen[0] = true;
        while (!frontier.empty()) {
            std::sort(frontier.begin(), frontier.end(), [&](std::uint32_t a, std::uint32_t b) {
                if (pattern.adj[a].size() != pattern.adj[b].size())
                    return pattern.adj[a].size() > pattern.adj[b].size();
                return a < b;
            });
            std::vector<std::uint32_t> next;
            for (auto q : frontier) {
                order.push_back(q);
                for (auto nb : pattern.adj[q])
                    if (!seen[nb]) {
                        seen[nb] = true;
                        next.push_back(nb);
                    }
            }
            frontier = std::move(next);
        }
    }

    std::set<std::vector<VertexId>> found;

    std::vector<VertexId> mapping(nq, 0);
    std::vector<bool> mapped(nq, false);
    std::vector<VertexId> used;

    auto consistent = [&](std::uint32_t q, VertexId v) {
        if (g.label(v) != pattern.vertex_labels[q]) return false;
        if (!g.directed_matching() && g.degree(v) < pattern.adj[q].size()) return false;
        for (auto nb : pattern.adj[q])
            if (mapped[nb] && !g.has_edge(mapping[nb], v) && !g.has_edge(v, mapping[nb]))
                return false;
        return true;
    };

    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == nq) {
            // per-edge orientation check (has_edge honors the matching view)
            for (auto [a, b] : pattern.edges)
                if (!g.has_edge(mapping[a], mapping[b])) return;
            found.insert(canonical_mapping(mapping, pattern));
            return;
        }
        std::uint32_t q = order[depth];
        // candidates: neighbors of a mapped query-neighbor when one exists,
        // otherwise all label matches; the narrowing is only sound when
        // neighbor lists are symmetric
        const std::vector<VertexId>* candidates = nullptr;
        if (!g.directed_matching())
            for (auto nb : pattern.adj[q])
                if (mapped[nb]) {
                    candidates = &g.neighbors(mapping[nb]);
                    break;
                }
        if (!candidates) candidates = &g.vertices_with_label(pattern.vertex_labels[q]);
        for (VertexId v : *candidates) {
            if (std::find(used.begin(), used.end(), v) != used.end()) continue;
            if (!consistent(q, v)) continue;
            mapping[q] = v;
            mapped[q] = true;
            used.push_back(v);
            self(self, depth + 1);
            used.pop_back();
            mapped[q] = false;
        }
    };
    rec(rec, 0);

    OracleResult out;
    out.embeddings.assign(found.begin(), found.end());
    return out;
}

}  // namespace igpm
