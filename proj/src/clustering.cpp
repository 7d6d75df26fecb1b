#include "igpm/clustering.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace igpm {

namespace {

// Compact weighted undirected graph for the move/aggregate phases.
// Convention: a self-loop of weight w contributes 2w to its vertex's volume
// and to the community-internal sum, so aggregation is exact.
struct WeightedGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
    std::vector<double> self_weight;  // A_vv (already doubled)
    std::vector<double> volume;
    double total_volume = 0;
};

WeightedGraph from_temporal(const TemporalGraph& g, const std::vector<VertexId>& nodes,
                            const std::vector<std::int32_t>& compact_of) {
    WeightedGraph w;
    w.n = nodes.size();
    w.adj.resize(w.n);
    w.self_weight.assign(w.n, 0.0);
    w.volume.assign(w.n, 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (VertexId u : g.neighbors(nodes[i])) {
            if (u == nodes[i]) {
                w.self_weight[i] += 2.0;
                continue;
            }
            std::int32_t j = u < compact_of.size() ? compact_of[u] : -1;
            if (j < 0) continue;  // edge leaves the induced set
            w.adj[i].emplace_back(static_cast<std::uint32_t>(j), 1.0);
        }
        double vol = w.self_weight[i];
        for (const auto& [_, wt] : w.adj[i]) vol += wt;
        w.volume[i] = vol;
        w.total_volume += vol;
    }
    return w;
}

double modularity_internal(const WeightedGraph& w, const std::vector<std::int32_t>& part) {
    if (w.total_volume == 0) return 0;
    std::unordered_map<std::int32_t, double> in, tot;
    for (std::size_t v = 0; v < w.n; ++v) {
        tot[part[v]] += w.volume[v];
        in[part[v]] += w.self_weight[v];
        for (const auto& [u, wt] : w.adj[v])
            if (part[u] == part[v]) in[part[v]] += wt;
    }
    double q = 0;
    for (const auto& [c, i] : in) q += i / w.total_volume;
    for (const auto& [c, t] : tot) q -= (t / w.total_volume) * (t / w.total_volume);
    return q;
}

// One local-move phase: sweeps in ascending node order until no move
// improves modularity by more than min_gain. Appends modularity after each
// sweep to the trace. Returns true if any node moved.
bool one_level(const WeightedGraph& w, std::vector<std::int32_t>& part, double min_gain,
               std::vector<double>* sweep_trace) {
    std::vector<double> comm_tot(w.n, 0.0);
    for (std::size_t v = 0; v < w.n; ++v) comm_tot[part[v]] += w.volume[v];

    bool any_move = false;
    std::vector<double> k_to(w.n, 0.0);  // weight from v to each community, scratch
    std::vector<std::int32_t> touched_comms;

    while (true) {
        std::size_t moves = 0;
        for (std::size_t v = 0; v < w.n; ++v) {
            std::int32_t cur = part[v];
            touched_comms.clear();
            k_to[cur] = 0;
            touched_comms.push_back(cur);
            for (const auto& [u, wt] : w.adj[v]) {
                std::int32_t c = part[u];
                if (k_to[c] == 0 && std::find(touched_comms.begin(), touched_comms.end(), c) ==
                                        touched_comms.end())
                    touched_comms.push_back(c);
                k_to[c] += wt;
            }
            comm_tot[cur] -= w.volume[v];

            // gain(c) = k_{v,c} - tot_c * vol_v / TV, which is the modularity
            // delta scaled by TV/2; ties keep the smaller community id
            double stay_gain = k_to[cur] - comm_tot[cur] * w.volume[v] / w.total_volume;
            std::int32_t best = cur;
            double best_gain = stay_gain;
            for (std::int32_t c : touched_comms) {
                if (c == cur) continue;
                double gain = k_to[c] - comm_tot[c] * w.volume[v] / w.total_volume;
                if (gain > best_gain || (gain == best_gain && best != cur && c < best)) {
                    best = c;
                    best_gain = gain;
                }
            }
            if (best != cur && 2.0 * (best_gain - stay_gain) / w.total_volume <= min_gain)
                best = cur;
            comm_tot[best] += w.volume[v];
            part[v] = best;
            for (std::int32_t c : touched_comms) k_to[c] = 0;
            if (best != cur) ++moves;
        }
        if (sweep_trace) sweep_trace->push_back(modularity_internal(w, part));
        if (moves == 0) break;
        any_move = true;
    }
    return any_move;
}

WeightedGraph aggregate(const WeightedGraph& w, const std::vector<std::int32_t>& part,
                        std::vector<std::int32_t>& renumber) {
    renumber.assign(w.n, -1);
    std::int32_t next = 0;
    for (std::size_t v = 0; v < w.n; ++v)
        if (renumber[part[v]] == -1) renumber[part[v]] = next++;

    WeightedGraph out;
    out.n = static_cast<std::size_t>(next);
    out.adj.resize(out.n);
    out.self_weight.assign(out.n, 0.0);
    out.volume.assign(out.n, 0.0);
    std::vector<std::unordered_map<std::int32_t, double>> between(out.n);
    for (std::size_t v = 0; v < w.n; ++v) {
        std::int32_t cv = renumber[part[v]];
        out.self_weight[cv] += w.self_weight[v];
        for (const auto& [u, wt] : w.adj[v]) {
            std::int32_t cu = renumber[part[u]];
            if (cu == cv)
                out.self_weight[cv] += wt;  // intra edges become self mass (both directions land here)
            else
                between[cv][cu] += wt;
        }
    }
    for (std::size_t c = 0; c < out.n; ++c) {
        std::vector<std::pair<std::uint32_t, double>> edges;
        edges.reserve(between[c].size());
        for (const auto& [u, wt] : between[c]) edges.emplace_back(static_cast<std::uint32_t>(u), wt);
        std::sort(edges.begin(), edges.end());
        out.adj[c] = std::move(edges);
        double vol = out.self_weight[c];
        for (const auto& [_, wt] : out.adj[c]) vol += wt;
        out.volume[c] = vol;
        out.total_volume += vol;
    }
    return out;
}

// Full multi-level Louvain over a compact graph. Returns a dense partition.
std::vector<std::int32_t> louvain_partition(WeightedGraph w, double min_gain,
                                            std::vector<double>* sweep_trace) {
    std::vector<std::int32_t> global(w.n);
    for (std::size_t v = 0; v < w.n; ++v) global[v] = static_cast<std::int32_t>(v);
    if (w.total_volume == 0) return global;

    while (true) {
        std::vector<std::int32_t> part(w.n);
        for (std::size_t v = 0; v < w.n; ++v) part[v] = static_cast<std::int32_t>(v);
        bool moved = one_level(w, part, min_gain, sweep_trace);
        if (!moved) break;
        std::vector<std::int32_t> renumber;
        WeightedGraph next = aggregate(w, part, renumber);
        for (auto& c : global) c = renumber[part[c]];
        if (next.n == w.n) break;
        w = std::move(next);
    }
    // dense renumber by first appearance
    std::unordered_map<std::int32_t, std::int32_t> dense;
    for (auto& c : global) {
        auto it = dense.find(c);
        if (it == dense.end()) it = dense.emplace(c, static_cast<std::int32_t>(dense.size())).first;
        c = it->second;
    }
    return global;
}

CommunityAssignment finalize_assignment(const TemporalGraph& g,
                                        std::vector<std::int32_t> assignment,
                                        std::vector<double> sweep_trace,
                                        std::vector<bool> indivisible_raw) {
    // renumber communities densely by first appearance over ascending vertex id
    std::unordered_map<std::int32_t, std::int32_t> dense;
    std::vector<bool> indivisible;
    for (VertexId v = 0; v < assignment.size(); ++v) {
        if (assignment[v] < 0) continue;
        auto it = dense.find(assignment[v]);
        if (it == dense.end()) {
            it = dense.emplace(assignment[v], static_cast<std::int32_t>(dense.size())).first;
            indivisible.push_back(assignment[v] < static_cast<std::int32_t>(indivisible_raw.size())
                                      ? indivisible_raw[assignment[v]]
                                      : false);
        }
        assignment[v] = it->second;
    }
    CommunityAssignment out;
    out.sizes.assign(dense.size(), 0);
    for (VertexId v = 0; v < assignment.size(); ++v)
        if (assignment[v] >= 0) ++out.sizes[assignment[v]];
    out.assignment = std::move(assignment);
    out.indivisible = std::move(indivisible);
    out.modularity = modularity_of(g, out.assignment);
    out.sweep_modularity = std::move(sweep_trace);
    return out;
}

}  // namespace

double modularity_of(const TemporalGraph& g, const std::vector<std::int32_t>& assignment) {
    std::vector<VertexId> nodes = g.vertex_ids();
    std::vector<std::int32_t> compact_of(g.id_bound(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) compact_of[nodes[i]] = static_cast<std::int32_t>(i);
    WeightedGraph w = from_temporal(g, nodes, compact_of);
    std::vector<std::int32_t> part(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::int32_t c = nodes[i] < assignment.size() ? assignment[nodes[i]] : -1;
        if (c < 0) throw std::invalid_argument("modularity_of: vertex without community");
        part[i] = c;
    }
    return modularity_internal(w, part);
}

CommunityAssignment louvain(const TemporalGraph& g, const LouvainParams& params) {
    std::vector<VertexId> nodes = g.vertex_ids();
    std::vector<std::int32_t> compact_of(g.id_bound(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) compact_of[nodes[i]] = static_cast<std::int32_t>(i);
    WeightedGraph w = from_temporal(g, nodes, compact_of);

    std::vector<double> sweeps;
    std::vector<std::int32_t> part = louvain_partition(std::move(w), params.min_gain, &sweeps);

    std::vector<std::int32_t> assignment(g.id_bound(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) assignment[nodes[i]] = part[i];
    return finalize_assignment(g, std::move(assignment), std::move(sweeps), {});
}

CommunityAssignment recursive_louvain(const TemporalGraph& g, std::size_t max_size,
                                      const LouvainParams& params) {
    if (max_size < 1) throw std::invalid_argument("recursive_louvain: max_size must be >= 1");
    CommunityAssignment top = louvain(g, params);

    std::vector<std::int32_t> assignment = top.assignment;
    std::int32_t next_comm = static_cast<std::int32_t>(top.num_communities());
    std::vector<bool> indivisible_raw(next_comm, false);

    // vertex lists per oversized community, processed FIFO
    std::deque<std::pair<std::int32_t, std::vector<VertexId>>> queue;
    {
        std::vector<std::vector<VertexId>> members(top.num_communities());
        for (VertexId v = 0; v < assignment.size(); ++v)
            if (assignment[v] >= 0) members[assignment[v]].push_back(v);
        for (std::size_t c = 0; c < members.size(); ++c)
            if (members[c].size() > max_size)
                queue.emplace_back(static_cast<std::int32_t>(c), std::move(members[c]));
    }

    std::vector<std::int32_t> compact_of(g.id_bound(), -1);
    while (!queue.empty()) {
        auto [comm, nodes] = std::move(queue.front());
        queue.pop_front();

        for (std::size_t i = 0; i < nodes.size(); ++i) compact_of[nodes[i]] = static_cast<std::int32_t>(i);
        WeightedGraph sub = from_temporal(g, nodes, compact_of);
        std::vector<std::int32_t> part = louvain_partition(std::move(sub), params.min_gain, nullptr);
        for (VertexId v : nodes) compact_of[v] = -1;

        std::int32_t parts = 0;
        for (std::int32_t c : part) parts = std::max(parts, c + 1);
        if (parts <= 1) {
            if (static_cast<std::size_t>(comm) >= indivisible_raw.size())
                indivisible_raw.resize(comm + 1, false);
            indivisible_raw[comm] = true;
            continue;
        }
        std::vector<std::vector<VertexId>> children(parts);
        for (std::size_t i = 0; i < nodes.size(); ++i) children[part[i]].push_back(nodes[i]);
        for (auto& child : children) {
            std::int32_t id = next_comm++;
            for (VertexId v : child) assignment[v] = id;
            if (child.size() > max_size) queue.emplace_back(id, std::move(child));
        }
    }

    return finalize_assignment(g, std::move(assignment), std::move(top.sweep_modularity),
                               std::move(indivisible_raw));
}

std::vector<VertexId> recompute_set_from_communities(const CommunityAssignment& assignment,
                                                     const std::vector<VertexId>& touched) {
    std::vector<bool> hit(assignment.num_communities(), false);
    std::vector<VertexId> out;
    for (VertexId t : touched) {
        std::int32_t c = assignment.community_of(t);
        if (c < 0)
            out.push_back(t);  // unassigned vertices pass through
        else
            hit[c] = true;
    }
    for (VertexId v = 0; v < assignment.assignment.size(); ++v) {
        std::int32_t c = assignment.assignment[v];
        if (c >= 0 && hit[c]) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace igpm
