#include "igpm/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace igpm {

namespace {
constexpr double kDropThreshold = 1e-15;  // entries below this are treated as zero
}

double ProximityVector::mass() const {
    // accumulate in key order so the sum is reproducible
    std::vector<std::pair<VertexId, double>> entries(scores.begin(), scores.end());
    std::sort(entries.begin(), entries.end());
    double total = 0;
    for (const auto& [v, s] : entries) total += s;
    return total;
}

double ProximityVector::l1_distance(const ProximityVector& other) const {
    double d = 0;
    for (const auto& [v, s] : scores) d += std::abs(s - other.score_of(v));
    for (const auto& [v, s] : other.scores)
        if (!scores.count(v)) d += s;
    return d;
}

ProximityVector rwr_batch(const TemporalGraph& g, VertexId source, const RwrParams& params,
                          std::uint64_t* work_units) {
    if (!g.has_vertex(source))
        throw std::invalid_argument("rwr_batch: unknown source " + std::to_string(source));
    if (params.restart_prob <= 0 || params.restart_prob >= 1)
        throw std::invalid_argument("rwr_batch: restart_prob must be in (0,1)");
    if (params.tol <= 0) throw std::invalid_argument("rwr_batch: tol must be > 0");

    const double c = params.restart_prob;
    const std::size_t n = g.id_bound();
    std::vector<double> cur(n, 0.0), nxt(n, 0.0);
    cur[source] = 1.0;

    std::vector<VertexId> ids = g.vertex_ids();
    std::uint64_t work = 0;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        double dangling = 0;
        for (VertexId v : ids) {
            double m = cur[v];
            if (m == 0.0) continue;
            const auto& nbrs = g.neighbors(v);
            if (nbrs.empty()) {
                dangling += m;
                continue;
            }
            double share = m * (1.0 - c) / static_cast<double>(nbrs.size());
            for (VertexId u : nbrs) nxt[u] += share;
            work += nbrs.size();
        }
        nxt[source] += c + (1.0 - c) * dangling;
        double change = 0;
        for (VertexId v : ids) change += std::abs(nxt[v] - cur[v]);
        work += ids.size();
        cur.swap(nxt);
        if (change < params.tol) break;
    }
    if (work_units) *work_units += work;

    ProximityVector out;
    out.source = source;
    for (VertexId v : ids)
        if (cur[v] > kDropThreshold) out.scores.emplace(v, cur[v]);
    return out;
}

ProximityStore::ProximityStore(const TemporalGraph& g, RwrParams params)
    : graph_(g), params_(params) {}

const ProximityVector& ProximityStore::get(VertexId source) {
    auto it = vectors_.find(source);
    if (it != vectors_.end()) return it->second;
    ProximityVector vec = rwr_batch(graph_, source, params_, &work_units_);
    return vectors_.emplace(source, std::move(vec)).first->second;
}

const ProximityVector* ProximityStore::peek(VertexId source) const {
    auto it = vectors_.find(source);
    return it == vectors_.end() ? nullptr : &it->second;
}

bool ProximityStore::contains(VertexId source) const { return vectors_.count(source) > 0; }

std::vector<VertexId> ProximityStore::cached_sources() const {
    std::vector<VertexId> out;
    out.reserve(vectors_.size());
    for (const auto& [v, _] : vectors_) out.push_back(v);
    return out;
}

void ProximityStore::repair(const std::vector<VertexId>& touched) {
    if (touched.empty() || vectors_.empty()) return;
    for (auto it = vectors_.begin(); it != vectors_.end();) {
        if (!graph_.has_vertex(it->first)) {
            it = vectors_.erase(it);
            continue;
        }
        repair_vector(it->second, touched);
        ++it;
    }
}

void ProximityStore::repair_vector(ProximityVector& vec, const std::vector<VertexId>& touched) {
    const double c = params_.restart_prob;
    const VertexId source = vec.source;
    auto& p = vec.scores;

    // Estimated score with zero-for-absent semantics.
    auto p_of = [&p](VertexId v) {
        auto it = p.find(v);
        return it == p.end() ? 0.0 : it->second;
    };

    // Dangling mass of the current estimate (only isolated vertices hold it).
    double dangling = 0;
    for (const auto& [v, s] : p)
        if (graph_.has_vertex(v) && graph_.degree(v) == 0) dangling += s;

    // Residual of the fixed-point equation at one vertex, against the current
    // graph: c*e_s(t) + (1-c)*(W^T p)(t) + (1-c)*dangling*e_s(t) - p(t).
    auto residual_at = [&](VertexId t) {
        double acc = 0;
        for (VertexId u : graph_.neighbors(t)) {
            double pu = p_of(u);
            if (pu != 0.0) acc += pu / static_cast<double>(graph_.degree(u));
        }
        double r = (1.0 - c) * acc - p_of(t);
        if (t == source) r += c + (1.0 - c) * dangling;
        return r;
    };

    // An update at vertex t perturbs residuals at t and everywhere t appears
    // as a neighbor, so seed the push frontier with touched + their current
    // neighborhoods.
    std::vector<VertexId> seeds;
    for (VertexId t : touched) {
        if (!graph_.has_vertex(t)) continue;
        seeds.push_back(t);
        const auto& nbrs = graph_.neighbors(t);
        seeds.insert(seeds.end(), nbrs.begin(), nbrs.end());
    }
    if (dangling > 0) seeds.push_back(source);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

    std::unordered_map<VertexId, double> residual;
    double sum_abs = 0;
    for (VertexId t : seeds) {
        double r = residual_at(t);
        work_units_ += graph_.degree(t) + 1;
        if (std::abs(r) > kDropThreshold) {
            residual.emplace(t, r);
            sum_abs += std::abs(r);
        }
    }
    if (residual.empty()) return;

    // Forward push (Gauss-Southwell on the residual linear system). Largest
    // residual first; ties broken by vertex id for reproducibility.
    using HeapEntry = std::pair<double, VertexId>;  // (|residual|, vertex)
    auto cmp = [](const HeapEntry& a, const HeapEntry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    };
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(cmp)> heap(cmp);
    for (const auto& [v, r] : residual) heap.emplace(std::abs(r), v);

    std::size_t pushes = 0;
    while (!heap.empty()) {
        auto [mag, t] = heap.top();
        heap.pop();
        auto rit = residual.find(t);
        if (rit == residual.end()) continue;
        double r = rit->second;
        if (std::abs(r) != mag) continue;  // stale heap entry
        if (std::abs(r) <= params_.push_tol && sum_abs <= params_.push_sum_tol) break;
        if (++pushes > params_.max_pushes) {
            // Push stalled; recompute from scratch rather than return a
            // vector that misses the agreement tolerance.
            vec = rwr_batch(graph_, source, params_, &work_units_);
            return;
        }

        residual.erase(rit);
        sum_abs -= std::abs(r);
        // Entries may dip negative mid-repair (overshoot after removals);
        // they are cleaned up only once the push converges.
        p[t] += r;

        const auto& nbrs = graph_.neighbors(t);
        work_units_ += nbrs.size() + 1;
        auto spill = [&](VertexId u, double amount) {
            double& ru = residual[u];
            sum_abs -= std::abs(ru);
            ru += amount;
            sum_abs += std::abs(ru);
            if (std::abs(ru) < kDropThreshold) {
                sum_abs -= std::abs(ru);
                residual.erase(u);
            } else {
                heap.emplace(std::abs(ru), u);
            }
        };
        if (nbrs.empty()) {
            spill(source, (1.0 - c) * r);
        } else {
            double share = (1.0 - c) * r / static_cast<double>(nbrs.size());
            for (VertexId u : nbrs) spill(u, share);
        }
    }

    // drop any residual fuzz that pushed an entry negative
    for (auto it = p.begin(); it != p.end();) {
        if (it->second <= kDropThreshold)
            it = p.erase(it);
        else
            ++it;
    }
}

}  // namespace igpm
