#pragma once

#include <cstdint>
#include <vector>

#include "igpm/graph.hpp"

namespace igpm {

struct LouvainParams {
    double min_gain = 1e-7;  // modularity gain needed to keep sweeping or move
};

struct CommunityAssignment {
    std::vector<std::int32_t> assignment;   // indexed by vertex id, -1 = absent vertex
    std::vector<std::size_t> sizes;         // per community, ids dense from 0
    std::vector<bool> indivisible;          // oversized but unsplittable (recursive mode)
    double modularity = 0;
    std::vector<double> sweep_modularity;   // after each local-move sweep, top level

    std::size_t num_communities() const { return sizes.size(); }
    std::int32_t community_of(VertexId v) const {
        return v < assignment.size() ? assignment[v] : -1;
    }
};

// Two-phase Louvain: local moves in ascending vertex order until no gain
// above min_gain, then community aggregation, repeated until stable.
// Deterministic. An edgeless graph yields singletons with modularity 0.
CommunityAssignment louvain(const TemporalGraph& g, const LouvainParams& params = {});

// Louvain, then re-applied to the induced subgraph of every community larger
// than max_size until all are within bound or flagged indivisible.
CommunityAssignment recursive_louvain(const TemporalGraph& g, std::size_t max_size,
                                      const LouvainParams& params = {});

// Union of all communities intersecting the touched set; touched vertices
// without an assignment pass through unchanged. Sorted output.
std::vector<VertexId> recompute_set_from_communities(const CommunityAssignment& assignment,
                                                     const std::vector<VertexId>& touched);

// Standalone modularity of an arbitrary assignment (recomputation oracle).
double modularity_of(const TemporalGraph& g, const std::vector<std::int32_t>& assignment);

}  // namespace igpm
