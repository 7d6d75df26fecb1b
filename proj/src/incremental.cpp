#include "igpm/incremental.hpp"

#include <algorithm>
#include <chrono>

namespace igpm {

std::uint64_t MatchIndex::edge_id(VertexId a, VertexId b) const {
    if (undirected_ && a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

void MatchIndex::index_result(std::size_t idx) {
    const MatchResult& r = *slots_[idx];
    for (VertexId v : r.mapping) by_vertex_[v].insert(idx);
    for (const BridgePath& path : r.bridges)
        for (std::size_t i = 0; i + 1 < path.hops.size(); ++i)
            by_edge_[edge_id(path.hops[i], path.hops[i + 1])].insert(idx);
    by_mapping_[r.canonical.empty() ? r.mapping : r.canonical] = idx;
}

void MatchIndex::unindex_result(std::size_t idx) {
    const MatchResult& r = *slots_[idx];
    for (VertexId v : r.mapping) {
        auto it = by_vertex_.find(v);
        if (it != by_vertex_.end()) {
            it->second.erase(idx);
            if (it->second.empty()) by_vertex_.erase(it);
        }
    }
    for (const BridgePath& path : r.bridges)
        for (std::size_t i = 0; i + 1 < path.hops.size(); ++i) {
            auto it = by_edge_.find(edge_id(path.hops[i], path.hops[i + 1]));
            if (it != by_edge_.end()) {
                it->second.erase(idx);
                if (it->second.empty()) by_edge_.erase(it);
            }
        }
    by_mapping_.erase(r.canonical.empty() ? r.mapping : r.canonical);
}

MatchIndex::AddOutcome MatchIndex::add(MatchResult result) {
    auto it = by_mapping_.find(result.canonical.empty() ? result.mapping : result.canonical);
    if (it != by_mapping_.end()) {
        const MatchResult& old = *slots_[it->second];
        bool better = (result.exact && !old.exact) ||
                      (result.exact == old.exact && result.goodness > old.goodness);
        if (!better) return AddOutcome::Duplicate;
        replace(it->second, std::move(result));
        return AddOutcome::Upgraded;
    }
    slots_.emplace_back(std::move(result));
    ++live_count_;
    index_result(slots_.size() - 1);
    return AddOutcome::Added;
}

void MatchIndex::invalidate(std::size_t idx) {
    unindex_result(idx);
    if (keep_tombstones_) tombstones_.push_back(std::move(*slots_[idx]));
    slots_[idx].reset();
    --live_count_;
}

void MatchIndex::replace(std::size_t idx, MatchResult result) {
    unindex_result(idx);
    slots_[idx] = std::move(result);
    index_result(idx);
}

void MatchIndex::clear() {
    slots_.clear();
    by_mapping_.clear();
    by_edge_.clear();
    by_vertex_.clear();
    tombstones_.clear();
    live_count_ = 0;
}

std::vector<std::size_t> MatchIndex::live_indices() const {
    std::vector<std::size_t> out;
    out.reserve(live_count_);
    for (std::size_t i = 0; i < slots_.size(); ++i)
        if (slots_[i]) out.push_back(i);
    return out;
}

std::size_t MatchIndex::exact_count() const {
    std::size_t n = 0;
    for (const auto& slot : slots_)
        if (slot && slot->exact) ++n;
    return n;
}

std::vector<std::size_t> MatchIndex::results_using_edge(VertexId a, VertexId b) const {
    auto it = by_edge_.find(edge_id(a, b));
    if (it == by_edge_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<std::size_t> MatchIndex::results_with_path_through(const TemporalGraph& g,
                                                               VertexId v) const {
    std::set<std::size_t> acc;
    if (g.has_vertex(v))
        for (VertexId u : g.neighbors(v)) {
            auto it = by_edge_.find(edge_id(v, u));
            if (it != by_edge_.end()) acc.insert(it->second.begin(), it->second.end());
        }
    return {acc.begin(), acc.end()};
}

std::optional<std::size_t> MatchIndex::find_instance(const std::vector<VertexId>& canonical) const {
    auto it = by_mapping_.find(canonical);
    if (it == by_mapping_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> MatchIndex::results_mapping_vertex(VertexId v) const {
    auto it = by_vertex_.find(v);
    if (it == by_vertex_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

bool MatchIndex::indexes_consistent() const {
    std::unordered_map<std::uint64_t, std::set<std::size_t>> edges;
    std::unordered_map<VertexId, std::set<std::size_t>> verts;
    std::map<std::vector<VertexId>, std::size_t> maps;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (!slots_[i]) continue;
        const MatchResult& r = *slots_[i];
        for (VertexId v : r.mapping) verts[v].insert(i);
        for (const BridgePath& path : r.bridges)
            for (std::size_t h = 0; h + 1 < path.hops.size(); ++h)
                edges[edge_id(path.hops[h], path.hops[h + 1])].insert(i);
        maps[r.canonical.empty() ? r.mapping : r.canonical] = i;
    }
    return edges == by_edge_ && verts == by_vertex_ && maps == by_mapping_;
}

StepMetrics igpm_step(const TemporalGraph& g, ProximityStore& store, MatchIndex& index,
                      const QueryPattern& pattern, const std::vector<VertexId>& recompute_set,
                      const MatcherConfig& cfg, std::size_t k_cap) {
    auto t0 = std::chrono::steady_clock::now();
    StepMetrics metrics;
    metrics.recomputed_vertices = recompute_set.size();

    Matcher matcher(g, store, cfg);
    std::uint64_t store_work0 = store.work_units();
    for (VertexId seed : recompute_set) {
        if (!g.has_vertex(seed)) {
            ++metrics.skipped_seeds;
            continue;
        }
        auto result = matcher.expand_from_seed(pattern, seed);
        if (!result) {
            ++metrics.skipped_seeds;
            continue;
        }
        if (index.add(std::move(*result)) == MatchIndex::AddOutcome::Added) {
            ++metrics.new_patterns;
            if (k_cap != 0 && metrics.new_patterns >= k_cap) break;
        }
    }
    metrics.total_patterns = index.size();
    metrics.exact_patterns = index.exact_count();
    metrics.work_units = matcher.work_units() + (store.work_units() - store_work0);
    metrics.elapsed_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0)
            .count());
    return metrics;
}

namespace {

// Recomputes the exact flag and goodness after bridges or mapping changed.
void refresh_derived(MatchResult& result, Matcher& matcher, const QueryPattern& pattern) {
    result.exact = true;
    for (const BridgePath& path : result.bridges)
        if (!path.direct()) result.exact = false;
    result.goodness = matcher.seed_goodness(pattern, result.mapping[matcher.config().seed_qid]);
    for (const BridgePath& path : result.bridges) result.goodness *= path.proximity;
}

}  // namespace

RepairReport repair_on_edge_add(const TemporalGraph& g, ProximityStore& store, MatchIndex& index,
                                const QueryPattern& pattern, VertexId a, VertexId b,
                                const MatcherConfig& cfg) {
    RepairReport report;
    std::set<std::size_t> affected;
    for (std::size_t idx : index.results_with_path_through(g, a)) affected.insert(idx);
    for (std::size_t idx : index.results_with_path_through(g, b)) affected.insert(idx);

    Matcher matcher(g, store, cfg);
    for (std::size_t idx : affected) {
        if (!index.alive(idx)) continue;
        MatchResult current = index.result(idx);
        bool changed = false;
        for (BridgePath& path : current.bridges) {
            bool touches = std::find(path.hops.begin(), path.hops.end(), a) != path.hops.end() ||
                           std::find(path.hops.begin(), path.hops.end(), b) != path.hops.end();
            if (!touches) continue;
            auto fresh = matcher.bridge(current.mapping[path.qsrc], current.mapping[path.qdst],
                                        cfg.max_hops);
            if (fresh && fresh->hops != path.hops && fresh->proximity > path.proximity) {
                fresh->qsrc = path.qsrc;
                fresh->qdst = path.qdst;
                path = std::move(*fresh);
                changed = true;
            }
        }
        if (changed) {
            refresh_derived(current, matcher, pattern);
            index.replace(idx, std::move(current));
            report.rebridged.push_back(idx);
        }
    }
    report.work_units = matcher.work_units();
    return report;
}

RepairReport repair_on_edge_remove(const TemporalGraph& g, ProximityStore& store,
                                   MatchIndex& index, const QueryPattern& pattern, VertexId a,
                                   VertexId b, const MatcherConfig& cfg) {
    RepairReport report;
    Matcher matcher(g, store, cfg);
    for (std::size_t idx : index.results_using_edge(a, b)) {
        if (!index.alive(idx)) continue;
        MatchResult current = index.result(idx);
        bool dead = false;
        bool changed = false;
        for (BridgePath& path : current.bridges) {
            bool uses = false;
            for (std::size_t h = 0; h + 1 < path.hops.size(); ++h) {
                VertexId x = path.hops[h], y = path.hops[h + 1];
                if ((x == a && y == b) || (x == b && y == a)) {
                    uses = true;
                    break;
                }
            }
            if (!uses) continue;
            auto fresh = matcher.bridge(current.mapping[path.qsrc], current.mapping[path.qdst],
                                        cfg.max_hops);
            if (!fresh) {
                dead = true;
                break;
            }
            fresh->qsrc = path.qsrc;
            fresh->qdst = path.qdst;
            path = std::move(*fresh);
            changed = true;
        }
        if (dead) {
            index.invalidate(idx);
            report.invalidated.push_back(idx);
        } else if (changed) {
            refresh_derived(current, matcher, pattern);
            index.replace(idx, std::move(current));
            report.rebridged.push_back(idx);
        }
    }
    report.work_units = matcher.work_units();
    return report;
}

RepairReport repair_on_label_update(const TemporalGraph& g, ProximityStore& store,
                                    MatchIndex& index, const QueryPattern& pattern, VertexId v,
                                    const MatcherConfig& cfg) {
    RepairReport report;
    Matcher matcher(g, store, cfg);
    for (std::size_t idx : index.results_mapping_vertex(v)) {
        if (!index.alive(idx)) continue;
        const MatchResult& old = index.result(idx);
        auto slot_it = std::find(old.mapping.begin(), old.mapping.end(), v);
        if (slot_it == old.mapping.end()) continue;
        auto q = static_cast<std::uint32_t>(slot_it - old.mapping.begin());
        if (g.label(v) == pattern.vertex_labels[q]) continue;  // still compatible

        // anchor: lowest-qid mapped query neighbor of the broken slot
        VertexId anchor = old.mapping[pattern.adj[q].front()];
        std::vector<VertexId> used = old.mapping;
        used.erase(std::find(used.begin(), used.end(), v));

        auto replacement = matcher.neighbor_expander(anchor, pattern.vertex_labels[q], used);
        bool dead = !replacement;
        MatchResult current = old;
        if (replacement) {
            current.mapping[q] = replacement->first;
            for (BridgePath& path : current.bridges) {
                if (path.qsrc != q && path.qdst != q) continue;
                auto fresh = matcher.bridge(current.mapping[path.qsrc], current.mapping[path.qdst],
                                            cfg.max_hops);
                if (!fresh) {
                    dead = true;
                    break;
                }
                fresh->qsrc = path.qsrc;
                fresh->qdst = path.qdst;
                path = std::move(*fresh);
            }
        }
        if (dead) {
            index.invalidate(idx);
            report.invalidated.push_back(idx);
        } else {
            current.canonical = canonical_mapping(current.mapping, pattern);
            refresh_derived(current, matcher, pattern);
            auto existing = index.find_instance(current.canonical);
            if (existing && *existing != idx) {
                // the remap landed on an instance the index already holds;
                // merge instead of storing a duplicate
                index.invalidate(idx);
                index.add(std::move(current));
                report.invalidated.push_back(idx);
            } else {
                index.replace(idx, std::move(current));
                report.remapped.push_back(idx);
            }
        }
    }
    report.work_units = matcher.work_units();
    return report;
}

std::vector<MatchResult> batch_rematch(const TemporalGraph& g, const QueryPattern& pattern,
                                       const MatcherConfig& cfg, std::size_t k,
                                       const RwrParams& rwr, std::uint64_t* work_units) {
    ProximityStore store(g, rwr);
    Matcher matcher(g, store, cfg);
    auto results = matcher.gray_match(pattern, k);
    if (work_units) *work_units += matcher.work_units() + store.work_units();
    return results;
}

}  // namespace igpm
