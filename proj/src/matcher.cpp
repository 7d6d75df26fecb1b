#include "igpm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace igpm {

Matcher::Matcher(const TemporalGraph& g, ProximityStore& store, MatcherConfig cfg)
    : graph_(g), store_(store), cfg_(cfg) {}

std::uint64_t Matcher::work_units() const {
    return stats_.seeds_tried + stats_.expander_scans + stats_.bridge_pops;
}

double Matcher::seed_goodness(const QueryPattern& pattern, VertexId v) {
    auto it = goodness_cache_.find(v);
    if (it != goodness_cache_.end()) return it->second;

    // BFS ball around v
    std::vector<VertexId> ball{v};
    std::vector<VertexId> frontier{v};
    for (int hop = 0; hop < cfg_.seed_ball_radius && !frontier.empty(); ++hop) {
        std::vector<VertexId> next;
        for (VertexId u : frontier)
            for (VertexId w : graph_.neighbors(u))
                if (std::find(ball.begin(), ball.end(), w) == ball.end()) {
                    ball.push_back(w);
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    std::sort(ball.begin(), ball.end());

    const auto wanted = pattern.label_set();
    const ProximityVector& vec = store_.get(v);
    double score = 0;
    for (VertexId u : ball)
        if (std::binary_search(wanted.begin(), wanted.end(), graph_.label(u)))
            score += vec.score_of(u);
    goodness_cache_.emplace(v, score);
    return score;
}

std::optional<std::pair<VertexId, double>> Matcher::seed_finder(
    const QueryPattern& pattern, std::uint32_t qseed, const std::vector<VertexId>& excluded) {
    if (qseed >= pattern.size()) throw std::invalid_argument("seed_finder: bad qseed");
    const auto& candidates = graph_.vertices_with_label(pattern.vertex_labels[qseed]);

    std::optional<std::pair<VertexId, double>> best;
    for (VertexId v : candidates) {
        if (std::binary_search(excluded.begin(), excluded.end(), v)) continue;
        ++stats_.seeds_tried;
        double score = seed_goodness(pattern, v);
        if (!best || score > best->second) best = {v, score};
    }
    return best;
}

std::optional<std::pair<VertexId, double>> Matcher::neighbor_expander(
    VertexId anchor, LabelId target_label, const std::vector<VertexId>& used) {
    const ProximityVector& vec = store_.get(anchor);
    const auto& candidates = graph_.vertices_with_label(target_label);

    std::optional<std::pair<VertexId, double>> best;
    for (VertexId u : candidates) {
        ++stats_.expander_scans;
        if (std::find(used.begin(), used.end(), u) != used.end()) continue;
        double r = vec.score_of(u);
        if (r <= 0) continue;  // unreachable from the anchor
        if (!best || r > best->second) best = {u, r};
    }
    return best;
}

std::optional<BridgePath> Matcher::bridge(VertexId src, VertexId dst, int max_hops) {
    if (src == dst) throw std::invalid_argument("bridge: src == dst");
    if (!graph_.has_vertex(src) || !graph_.has_vertex(dst)) return std::nullopt;

    // hop-bounded Dijkstra; weight of edge (a,b) is -log r_{a,b}
    struct State {
        double dist;
        int hops;
        VertexId v;
        bool operator>(const State& o) const {
            if (dist != o.dist) return dist > o.dist;
            if (hops != o.hops) return hops > o.hops;
            return v > o.v;
        }
    };
    // best distance per (vertex, hops-used)
    std::unordered_map<std::uint64_t, double> dist;
    std::unordered_map<std::uint64_t, std::uint64_t> parent;
    auto key = [](VertexId v, int h) { return (static_cast<std::uint64_t>(h) << 32) | v; };

    std::priority_queue<State, std::vector<State>, std::greater<State>> pq;
    pq.push({0.0, 0, src});
    dist[key(src, 0)] = 0.0;

    while (!pq.empty()) {
        State s = pq.top();
        pq.pop();
        ++stats_.bridge_pops;
        auto k = key(s.v, s.hops);
        auto dit = dist.find(k);
        if (dit == dist.end() || s.dist > dit->second) continue;
        if (s.v == dst) {
            BridgePath path;
            path.hops.push_back(dst);
            std::uint64_t cur = k;
            while (cur != key(src, 0)) {
                cur = parent.at(cur);
                path.hops.push_back(static_cast<VertexId>(cur & 0xffffffffu));
            }
            std::reverse(path.hops.begin(), path.hops.end());
            path.proximity = std::exp(-s.dist);
            return path;
        }
        if (s.hops == max_hops) continue;
        const ProximityVector& vec = store_.get(s.v);
        for (VertexId u : graph_.neighbors(s.v)) {
            double r = vec.score_of(u);
            if (r <= 0) continue;
            double nd = s.dist - std::log(r);
            auto nk = key(u, s.hops + 1);
            auto it = dist.find(nk);
            if (it == dist.end() || nd < it->second) {
                dist[nk] = nd;
                parent[nk] = k;
                pq.push({nd, s.hops + 1, u});
            }
        }
    }
    return std::nullopt;
}

// Exact-embedding attempt anchored at the seed: depth-first over query
// vertices in BFS order, candidates restricted to vertices adjacent to every
// already-mapped query neighbor, tried in descending proximity from the BFS
// parent. Finds an exact embedding through the seed whenever one exists.
std::optional<MatchResult> Matcher::try_exact_from_seed(const QueryPattern& pattern,
                                                        VertexId seed) {
    const std::size_t nq = pattern.size();
    const std::uint32_t qseed = cfg_.seed_qid;

    // BFS slot order from the seed vertex, lowest qid first
    std::vector<std::uint32_t> order{qseed};
    {
        std::vector<bool> seen(nq, false);
        seen[qseed] = true;
        for (std::size_t head = 0; head < order.size(); ++head)
            for (std::uint32_t nb : pattern.adj[order[head]])
                if (!seen[nb]) {
                    seen[nb] = true;
                    order.push_back(nb);
                }
    }

    constexpr VertexId kUnmapped = static_cast<VertexId>(-1);
    std::vector<VertexId> mapping(nq, kUnmapped);
    mapping[qseed] = seed;

    auto rec = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == nq) return true;
        std::uint32_t q = order[depth];
        // anchor: first already-mapped query neighbor in BFS order
        VertexId anchor = kUnmapped;
        for (std::uint32_t nb : pattern.adj[q])
            if (mapping[nb] != kUnmapped) {
                anchor = mapping[nb];
                break;
            }
        if (anchor == kUnmapped) return false;  // unreachable for connected patterns

        std::vector<std::pair<double, VertexId>> candidates;
        const ProximityVector& vec = store_.get(anchor);
        for (VertexId u : graph_.neighbors(anchor)) {
            ++stats_.expander_scans;
            if (graph_.label(u) != pattern.vertex_labels[q]) continue;
            if (std::find(mapping.begin(), mapping.end(), u) != mapping.end()) continue;
            bool consistent = true;
            for (std::uint32_t nb : pattern.adj[q]) {
                if (mapping[nb] == kUnmapped) continue;
                if (!graph_.has_edge(mapping[nb], u) && !graph_.has_edge(u, mapping[nb])) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            candidates.emplace_back(-vec.score_of(u), u);  // sort ascending = r descending
        }
        std::sort(candidates.begin(), candidates.end());
        for (const auto& [neg_r, u] : candidates) {
            mapping[q] = u;
            if (self(self, depth + 1)) return true;
            mapping[q] = kUnmapped;
        }
        return false;
    };
    if (!rec(rec, 1)) return std::nullopt;

    MatchResult result;
    result.mapping = std::move(mapping);
    result.exact = true;
    // realize every query edge as its direct data edge, in BFS edge order
    std::vector<bool> edge_done(nq * nq, false);
    auto edge_key = [nq](std::uint32_t a, std::uint32_t b) {
        return std::min(a, b) * nq + std::max(a, b);
    };
    for (std::uint32_t qa : order)
        for (std::uint32_t qb : pattern.adj[qa]) {
            if (edge_done[edge_key(qa, qb)]) continue;
            edge_done[edge_key(qa, qb)] = true;
            BridgePath path;
            path.qsrc = qa;
            path.qdst = qb;
            path.hops = {result.mapping[qa], result.mapping[qb]};
            path.proximity = store_.get(result.mapping[qa]).score_of(result.mapping[qb]);
            result.bridges.push_back(std::move(path));
        }
    result.canonical = canonical_mapping(result.mapping, pattern);
    result.goodness = seed_goodness(pattern, seed);
    for (const BridgePath& b : result.bridges) result.goodness *= b.proximity;
    return result;
}

std::optional<MatchResult> Matcher::expand_from_seed(const QueryPattern& pattern, VertexId seed) {
    if (!graph_.has_vertex(seed)) return std::nullopt;
    const std::uint32_t qseed = cfg_.seed_qid;
    if (graph_.label(seed) != pattern.vertex_labels[qseed]) return std::nullopt;

    if (auto exact = try_exact_from_seed(pattern, seed)) return exact;

    const std::size_t nq = pattern.size();
    constexpr VertexId kUnmapped = static_cast<VertexId>(-1);
    std::vector<VertexId> mapping(nq, kUnmapped);
    std::vector<VertexId> used{seed};
    mapping[qseed] = seed;

    MatchResult result;
    bool complete = true;

    // process query edges in BFS order from the seed, lowest qid first
    std::vector<bool> edge_done(nq * nq, false);
    auto edge_key = [nq](std::uint32_t a, std::uint32_t b) {
        return std::min(a, b) * nq + std::max(a, b);
    };
    std::vector<std::uint32_t> queue{qseed};
    std::vector<bool> enqueued(nq, false);
    enqueued[qseed] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t qa = queue[head];
        for (std::uint32_t qb : pattern.adj[qa]) {
            if (edge_done[edge_key(qa, qb)]) continue;
            edge_done[edge_key(qa, qb)] = true;
            if (mapping[qb] == kUnmapped) {
                auto expanded = neighbor_expander(mapping[qa], pattern.vertex_labels[qb], used);
                if (!expanded) {
                    ++stats_.failed_expansions;
                    return std::nullopt;  // no candidate: instance abandoned
                }
                mapping[qb] = expanded->first;
                used.push_back(expanded->first);
            }
            auto path = bridge(mapping[qa], mapping[qb], cfg_.max_hops);
            if (path) {
                path->qsrc = qa;
                path->qdst = qb;
                result.bridges.push_back(std::move(*path));
            } else {
                ++stats_.failed_expansions;
                if (!cfg_.allow_partial) return std::nullopt;
                complete = false;
            }
            if (!enqueued[qb]) {
                enqueued[qb] = true;
                queue.push_back(qb);
            }
        }
    }

    result.mapping = std::move(mapping);
    result.canonical = canonical_mapping(result.mapping, pattern);
    result.exact = complete;
    for (const BridgePath& b : result.bridges)
        if (!b.direct()) result.exact = false;
    result.goodness = seed_goodness(pattern, seed);
    for (const BridgePath& b : result.bridges) result.goodness *= b.proximity;
    return result;
}

std::vector<MatchResult> Matcher::gray_match(const QueryPattern& pattern, std::size_t k) {
    std::vector<MatchResult> results;
    std::vector<VertexId> excluded;  // prior seeds, sorted
    while (k == 0 || results.size() < k) {
        auto seed = seed_finder(pattern, cfg_.seed_qid, excluded);
        if (!seed) break;
        excluded.insert(std::lower_bound(excluded.begin(), excluded.end(), seed->first),
                        seed->first);
        auto res = expand_from_seed(pattern, seed->first);
        if (!res) continue;
        bool duplicate = false;
        for (const MatchResult& r : results)
            if (r.canonical == res->canonical) {
                duplicate = true;
                break;
            }
        if (!duplicate) results.push_back(std::move(*res));
    }
    // exact embeddings outrank bridged ones; goodness orders within each class
    std::stable_sort(results.begin(), results.end(), [](const MatchResult& a, const MatchResult& b) {
        if (a.exact != b.exact) return a.exact;
        if (a.goodness != b.goodness) return a.goodness > b.goodness;
        return a.mapping < b.mapping;
    });
    return results;
}

}  // namespace igpm
