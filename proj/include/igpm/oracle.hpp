#pragma once

#include <vector>

#include "igpm/graph.hpp"
#include "igpm/pattern.hpp"

namespace igpm {

// Complete set of exact embeddings (label-consistent injective mappings that
// realize every query edge as a direct data edge), deduplicated modulo
// pattern automorphisms. mapping[qid] = data vertex; stored in canonical form.
struct OracleResult {
    std::vector<std::vector<VertexId>> embeddings;  // sorted

    bool contains(const std::vector<VertexId>& mapping, const QueryPattern& pattern) const;
    std::size_t count() const { return embeddings.size(); }
};

// Backtracking enumeration with label and degree pruning. Guarded by a vertex
// cap: this is a test oracle, not a production matcher.
OracleResult brute_force_embeddings(const TemporalGraph& g, const QueryPattern& pattern,
                                    std::size_t vertex_cap = 2000);

}  // namespace igpm
