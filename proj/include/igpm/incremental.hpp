#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "igpm/matcher.hpp"

namespace igpm {

struct StepMetrics {
    std::uint32_t step = 0;
    std::uint64_t elapsed_ns = 0;
    std::uint64_t work_units = 0;   // deterministic cost counter
    std::size_t recomputed_vertices = 0;
    std::size_t new_patterns = 0;
    std::size_t invalidated_patterns = 0;
    std::size_t total_patterns = 0;
    std::size_t exact_patterns = 0;
    std::size_t skipped_seeds = 0;  // label-incompatible or failed expansions
};

struct RepairReport {
    std::vector<std::size_t> rebridged;
    std::vector<std::size_t> remapped;
    std::vector<std::size_t> invalidated;
    std::uint64_t work_units = 0;
    bool empty() const { return rebridged.empty() && remapped.empty() && invalidated.empty(); }
};

// Live set of match results with inverted indexes over mapped vertices and
// bridge-path edges. Results with identical mappings are merged, keeping the
// better of the two (exact wins, then goodness).
class MatchIndex {
public:
    explicit MatchIndex(bool undirected = true) : undirected_(undirected) {}

    enum class AddOutcome { Added, Duplicate, Upgraded };
    AddOutcome add(MatchResult result);
    void invalidate(std::size_t idx);        // drops the result (tombstone optional)
    void replace(std::size_t idx, MatchResult result);  // same mapping, new bridges
    void clear();

    bool alive(std::size_t idx) const { return idx < slots_.size() && slots_[idx].has_value(); }
    const MatchResult& result(std::size_t idx) const { return *slots_[idx]; }
    std::vector<std::size_t> live_indices() const;   // ascending
    std::size_t size() const { return live_count_; }
    std::size_t exact_count() const;

    std::vector<std::size_t> results_using_edge(VertexId a, VertexId b) const;
    std::vector<std::size_t> results_with_path_through(const TemporalGraph& g, VertexId v) const;
    std::vector<std::size_t> results_mapping_vertex(VertexId v) const;
    std::optional<std::size_t> find_instance(const std::vector<VertexId>& canonical) const;

    void set_tombstones(bool keep) { keep_tombstones_ = keep; }
    const std::vector<MatchResult>& tombstones() const { return tombstones_; }

    // Rebuilds by_edge/by_vertex from live results and compares with the
    // maintained indexes. Test hook for the consistency invariant.
    bool indexes_consistent() const;

private:
    std::uint64_t edge_id(VertexId a, VertexId b) const;
    void index_result(std::size_t idx);
    void unindex_result(std::size_t idx);

    bool undirected_;
    bool keep_tombstones_ = false;
    std::size_t live_count_ = 0;
    std::vector<std::optional<MatchResult>> slots_;
    std::vector<MatchResult> tombstones_;
    std::map<std::vector<VertexId>, std::size_t> by_mapping_;
    std::unordered_map<std::uint64_t, std::set<std::size_t>> by_edge_;
    std::unordered_map<VertexId, std::set<std::size_t>> by_vertex_;
};

// Runs the expansion loop with each recompute vertex forced as seed and
// appends distinct new results. k_cap = 0 means no cap on new results.
StepMetrics igpm_step(const TemporalGraph& g, ProximityStore& store, MatchIndex& index,
                      const QueryPattern& pattern, const std::vector<VertexId>& recompute_set,
                      const MatcherConfig& cfg, std::size_t k_cap = 0);

// Re-runs bridges of results whose paths pass either endpoint of the new
// edge; replaces a path when the new edge improves it.
RepairReport repair_on_edge_add(const TemporalGraph& g, ProximityStore& store, MatchIndex& index,
                                const QueryPattern& pattern, VertexId a, VertexId b,
                                const MatcherConfig& cfg);

// Re-runs bridges that used the removed edge; invalidates results left with
// no path within max_hops.
RepairReport repair_on_edge_remove(const TemporalGraph& g, ProximityStore& store,
                                   MatchIndex& index, const QueryPattern& pattern, VertexId a,
                                   VertexId b, const MatcherConfig& cfg);

// Re-runs the expander for result slots whose mapped vertex no longer
// carries the required label; invalidates when no replacement exists.
RepairReport repair_on_label_update(const TemporalGraph& g, ProximityStore& store,
                                    MatchIndex& index, const QueryPattern& pattern, VertexId v,
                                    const MatcherConfig& cfg);

// From-scratch baseline: fresh proximity store, seeds drawn from all
// vertices. k = 0 returns every distinct result.
std::vector<MatchResult> batch_rematch(const TemporalGraph& g, const QueryPattern& pattern,
                                       const MatcherConfig& cfg, std::size_t k,
                                       const RwrParams& rwr, std::uint64_t* work_units = nullptr);

}  // namespace igpm
