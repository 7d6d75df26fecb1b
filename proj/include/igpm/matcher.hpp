#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "igpm/graph.hpp"
#include "igpm/pattern.hpp"
#include "igpm/proximity.hpp"

namespace igpm {

// One query edge realized as a data-graph path.
struct BridgePath {
    std::uint32_t qsrc = 0;
    std::uint32_t qdst = 0;
    std::vector<VertexId> hops;  // vertex sequence, hops.front() = mapping[qsrc]
    double proximity = 1.0;      // product of per-hop r values
    bool direct() const { return hops.size() == 2; }
    std::size_t length() const { return hops.size() - 1; }
};

// Best-effort embedding: injective label-preserving vertex correspondence
// plus one path per query edge. exact means every path is a single edge.
// `canonical` is the mapping reduced modulo pattern automorphisms; results
// with equal canonical forms are the same pattern instance.
struct MatchResult {
    std::vector<VertexId> mapping;       // qid -> data vertex
    std::vector<VertexId> canonical;
    std::vector<BridgePath> bridges;
    double goodness = 0;
    bool exact = false;
};

struct MatcherConfig {
    int max_hops = 3;
    int seed_ball_radius = 1;     // BFS radius of the seed-goodness mass sum
    std::uint32_t seed_qid = 0;   // query vertex matched first
    bool allow_partial = false;   // keep results with unbridgeable query edges
    std::size_t k = 10;
};

struct MatcherStats {
    std::uint64_t seeds_tried = 0;
    std::uint64_t expander_scans = 0;
    std::uint64_t bridge_pops = 0;
    std::uint64_t failed_expansions = 0;
};

// G-Ray core. Holds references to one graph/store pair; the store fills
// lazily as goodness scores demand proximity vectors.
class Matcher {
public:
    Matcher(const TemporalGraph& g, ProximityStore& store, MatcherConfig cfg = {});

    // Seed goodness: RWR mass captured within the BFS ball around v,
    // restricted to vertices whose labels occur in the pattern.
    double seed_goodness(const QueryPattern& pattern, VertexId v);

    // Best label-matching seed candidate outside `excluded` (sorted).
    // Ties go to the smaller vertex id. nullopt when no candidate exists.
    std::optional<std::pair<VertexId, double>> seed_finder(const QueryPattern& pattern,
                                                           std::uint32_t qseed,
                                                           const std::vector<VertexId>& excluded);

    // Best label-matching candidate by proximity from the anchor, ranked over
    // the whole reachable set (bridge supplies connectivity later).
    std::optional<std::pair<VertexId, double>> neighbor_expander(VertexId anchor,
                                                                 LabelId target_label,
                                                                 const std::vector<VertexId>& used);

    // Highest-proximity path between two distinct vertices, at most max_hops
    // edges: Dijkstra on -log r per-hop weights.
    std::optional<BridgePath> bridge(VertexId src, VertexId dst, int max_hops);

    // Full expansion with a forced seed vertex: an exact embedding through
    // the seed when one exists, otherwise the greedy best-effort expansion
    // with bridged query edges. nullopt when the seed label is incompatible
    // or the expansion cannot complete (unless allow_partial).
    std::optional<MatchResult> expand_from_seed(const QueryPattern& pattern, VertexId seed);

    // Up to k results by repeated seed_finder with prior seeds excluded,
    // sorted by goodness descending. k = 0 means no limit.
    std::vector<MatchResult> gray_match(const QueryPattern& pattern, std::size_t k);

    const MatcherStats& stats() const { return stats_; }
    std::uint64_t work_units() const;
    MatcherConfig& config() { return cfg_; }

private:
    std::optional<MatchResult> try_exact_from_seed(const QueryPattern& pattern, VertexId seed);

    const TemporalGraph& graph_;
    ProximityStore& store_;
    MatcherConfig cfg_;
    MatcherStats stats_;
    std::unordered_map<VertexId, double> goodness_cache_;  // valid for one graph state
};

}  // namespace igpm
