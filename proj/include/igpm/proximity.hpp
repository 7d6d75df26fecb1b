#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "igpm/graph.hpp"

namespace igpm {

struct RwrParams {
    double restart_prob = 0.15;
    double tol = 1e-6;            // batch stopping threshold on L1 change
    int max_iters = 200;
    double push_tol = 1e-5;       // pointwise residual threshold for repair
    double push_sum_tol = 3e-7;   // aggregate residual budget per repair pass
    std::size_t max_pushes = 2'000'000;  // safety valve; falls back to batch
};

// Random-walk-with-restart scores from one source. Entries are strictly
// positive; missing means unreachable (score 0).
struct ProximityVector {
    VertexId source = 0;
    std::unordered_map<VertexId, double> scores;

    double score_of(VertexId u) const {
        auto it = scores.find(u);
        return it == scores.end() ? 0.0 : it->second;
    }
    double mass() const;
    double l1_distance(const ProximityVector& other) const;
};

// Power iteration on r = c*e_s + (1-c)*W^T r with W the row-normalized
// adjacency under the graph's matching view. Dangling vertices hand their
// walk mass back to the source.
ProximityVector rwr_batch(const TemporalGraph& g, VertexId source, const RwrParams& params,
                          std::uint64_t* work_units = nullptr);

// Lazy cache of per-source vectors with localized repair after graph updates.
class ProximityStore {
public:
    explicit ProximityStore(const TemporalGraph& g, RwrParams params = {});

    const ProximityVector& get(VertexId source);        // computes on first use
    const ProximityVector* peek(VertexId source) const;
    bool contains(VertexId source) const;

    // Repairs every cached vector whose residual at a touched vertex (or its
    // neighborhood) exceeds push_tol, by forward push on the residual system.
    // Cached vectors whose source vanished from the graph are evicted.
    void repair(const std::vector<VertexId>& touched);

    std::vector<VertexId> cached_sources() const;       // sorted
    std::size_t size() const { return vectors_.size(); }
    void clear() { vectors_.clear(); }
    const RwrParams& params() const { return params_; }

    // Deterministic cost counter (proportional to arithmetic performed);
    // backs the work-based reward.
    std::uint64_t work_units() const { return work_units_; }
    std::uint64_t take_work_units() {
        auto w = work_units_;
        work_units_ = 0;
        return w;
    }

private:
    void repair_vector(ProximityVector& vec, const std::vector<VertexId>& touched);

    const TemporalGraph& graph_;
    RwrParams params_;
    std::map<VertexId, ProximityVector> vectors_;  // ordered for deterministic iteration
    std::uint64_t work_units_ = 0;
};

}  // namespace igpm
