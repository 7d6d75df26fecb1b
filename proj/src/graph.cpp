#include "igpm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace igpm {

namespace {

// sorted-vector set helpers
bool sorted_contains(const std::vector<VertexId>& v, VertexId x) {
    return std::binary_search(v.begin(), v.end(), x);
}

bool sorted_insert(std::vector<VertexId>& v, VertexId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) return false;
    v.insert(it, x);
    return true;
}

bool sorted_erase(std::vector<VertexId>& v, VertexId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return false;
    v.erase(it);
    return true;
}

}  // namespace

LabelId LabelTable::intern(std::string_view s) {
    auto it = ids_.find(std::string(s));
    if (it != ids_.end()) return it->second;
    LabelId id = static_cast<LabelId>(names_.size());
    names_.emplace_back(s);
    ids_.emplace(names_.back(), id);
    return id;
}

LabelId LabelTable::find(std::string_view s) const {
    auto it = ids_.find(std::string(s));
    return it == ids_.end() ? kNoLabel : it->second;
}

const std::string& LabelTable::name(LabelId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size())
        throw std::out_of_range("unknown label id " + std::to_string(id));
    return names_[static_cast<std::size_t>(id)];
}

TemporalGraph::TemporalGraph(bool directed_matching, std::string default_label)
    : TemporalGraph(LabelTable{}, directed_matching, std::move(default_label)) {}

TemporalGraph::TemporalGraph(LabelTable labels, bool directed_matching, std::string default_label)
    : labels_(std::move(labels)), directed_(directed_matching) {
    default_label_ = labels_.intern(default_label);
}

void TemporalGraph::grow_to(VertexId v) {
    if (v < labels_of_.size()) return;
    std::size_t n = static_cast<std::size_t>(v) + 1;
    labels_of_.resize(n, kNoLabel);
    out_.resize(n);
    in_.resize(n);
    und_.resize(n);
}

VertexId TemporalGraph::add_vertex(VertexId v, LabelId label) {
    grow_to(v);
    if (labels_of_[v] != kNoLabel)
        throw std::invalid_argument("vertex " + std::to_string(v) + " already exists");
    labels_of_[v] = label;
    if (static_cast<std::size_t>(label) >= by_label_.size()) by_label_.resize(label + 1);
    sorted_insert(by_label_[label], v);
    ++num_vertices_;
    return v;
}

VertexId TemporalGraph::ensure_vertex(VertexId v) {
    grow_to(v);
    if (labels_of_[v] == kNoLabel) add_vertex(v, default_label_);
    return v;
}

bool TemporalGraph::has_vertex(VertexId v) const {
    return v < labels_of_.size() && labels_of_[v] != kNoLabel;
}

bool TemporalGraph::add_edge(VertexId u, VertexId v) {
    ensure_vertex(u);
    ensure_vertex(v);
    bool present = directed_ ? sorted_contains(out_[u], v) : sorted_contains(und_[u], v);
    if (present) return false;
    if (sorted_insert(out_[u], v)) {
        sorted_insert(in_[v], u);
        ++num_directed_edges_;
    }
    if (sorted_insert(und_[u], v)) ++num_undirected_edges_;
    if (u != v) sorted_insert(und_[v], u);
    return true;
}

void TemporalGraph::remove_edge(VertexId u, VertexId v) {
    bool present = has_vertex(u) && has_vertex(v) &&
                   (directed_ ? sorted_contains(out_[u], v) : sorted_contains(und_[u], v));
    if (!present)
        throw std::invalid_argument("edge remove: edge " + std::to_string(u) + "-" +
                                    std::to_string(v) + " not present");
    if (directed_) {
        sorted_erase(out_[u], v);
        sorted_erase(in_[v], u);
        --num_directed_edges_;
        // drop the undirected mirror only when no orientation remains
        if (!sorted_contains(out_[v], u)) {
            sorted_erase(und_[u], v);
            if (u != v) sorted_erase(und_[v], u);
            --num_undirected_edges_;
        }
    } else {
        if (sorted_erase(out_[u], v)) {
            sorted_erase(in_[v], u);
            --num_directed_edges_;
        }
        if (u != v && sorted_erase(out_[v], u)) {
            sorted_erase(in_[u], v);
            --num_directed_edges_;
        }
        sorted_erase(und_[u], v);
        if (u != v) sorted_erase(und_[v], u);
        --num_undirected_edges_;
    }
}

void TemporalGraph::set_label(VertexId v, LabelId label) {
    if (!has_vertex(v))
        throw std::invalid_argument("set_label: unknown vertex " + std::to_string(v));
    LabelId old = labels_of_[v];
    if (old == label) return;
    sorted_erase(by_label_[old], v);
    labels_of_[v] = label;
    if (static_cast<std::size_t>(label) >= by_label_.size()) by_label_.resize(label + 1);
    sorted_insert(by_label_[label], v);
}

bool TemporalGraph::has_edge(VertexId u, VertexId v) const {
    if (!has_vertex(u) || !has_vertex(v)) return false;
    return directed_ ? sorted_contains(out_[u], v) : sorted_contains(und_[u], v);
}

std::size_t TemporalGraph::num_edges() const {
    return directed_ ? num_directed_edges_ : num_undirected_edges_;
}

std::size_t TemporalGraph::degree(VertexId v) const {
    if (!has_vertex(v))
        throw std::invalid_argument("degree: unknown vertex " + std::to_string(v));
    return directed_ ? out_[v].size() : und_[v].size();
}

const std::vector<VertexId>& TemporalGraph::neighbors(VertexId v) const {
    if (!has_vertex(v))
        throw std::invalid_argument("neighbors: unknown vertex " + std::to_string(v));
    return directed_ ? out_[v] : und_[v];
}

LabelId TemporalGraph::label(VertexId v) const {
    if (!has_vertex(v))
        throw std::invalid_argument("label: unknown vertex " + std::to_string(v));
    return labels_of_[v];
}

const std::vector<VertexId>& TemporalGraph::vertices_with_label(LabelId l) const {
    static const std::vector<VertexId> kEmpty;
    if (l < 0 || static_cast<std::size_t>(l) >= by_label_.size()) return kEmpty;
    return by_label_[l];
}

std::vector<VertexId> TemporalGraph::vertex_ids() const {
    std::vector<VertexId> ids;
    ids.reserve(num_vertices_);
    for (VertexId v = 0; v < labels_of_.size(); ++v)
        if (labels_of_[v] != kNoLabel) ids.push_back(v);
    return ids;
}

ApplyResult TemporalGraph::apply_batch(const UpdateBatch& batch) {
    if (batch.step != step_ + 1)
        throw std::invalid_argument("apply_batch: expected step " + std::to_string(step_ + 1) +
                                    ", got " + std::to_string(batch.step));
    ApplyResult result;
    result.effective.reserve(batch.events.size());
    std::vector<VertexId> touched;
    for (const UpdateEvent& ev : batch.events) {
        switch (ev.kind) {
            case UpdateKind::EdgeAdd: {
                bool added = add_edge(ev.u, ev.v);
                if (!added) ++result.duplicate_adds;
                result.effective.push_back(added);
                touched.push_back(ev.u);
                touched.push_back(ev.v);
                break;
            }
            case UpdateKind::EdgeRemove: {
                remove_edge(ev.u, ev.v);
                result.effective.push_back(true);
                touched.push_back(ev.u);
                touched.push_back(ev.v);
                break;
            }
            case UpdateKind::VertexLabelUpdate: {
                LabelId old = label(ev.u);
                set_label(ev.u, ev.new_label);
                result.effective.push_back(old != ev.new_label);
                touched.push_back(ev.u);
                break;
            }
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    result.touched = std::move(touched);
    ++step_;
    return result;
}

std::vector<VertexId> EdgeStream::peek_touched(const UpdateBatch& batch) {
    std::vector<VertexId> touched;
    for (const UpdateEvent& ev : batch.events) {
        touched.push_back(ev.u);
        if (ev.kind != UpdateKind::VertexLabelUpdate) touched.push_back(ev.v);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return touched;
}

namespace {

struct RawEvent {
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    std::int64_t ts = 0;
    std::string label;  // optional 4th column, applies to src
    std::size_t order = 0;
};

std::int64_t bucket_of(std::int64_t ts, StepGranularity g) {
    switch (g) {
        case StepGranularity::Hour: return ts / 3600;
        case StepGranularity::Day: return ts / 86400;
        case StepGranularity::Raw: return ts;
    }
    return ts;
}

}  // namespace

EdgeStream ingest_edge_stream(const std::string& path, StepGranularity granularity) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ingest: cannot open " + path);

    std::vector<RawEvent> events;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        RawEvent ev;
        if (!(ls >> ev.src >> ev.dst >> ev.ts))
            throw std::runtime_error("ingest: malformed line " + std::to_string(lineno) + " in " + path);
        ls >> ev.label;  // optional
        ev.order = events.size();
        events.push_back(std::move(ev));
    }

    EdgeStream stream;
    stream.source_id = path;
    stream.num_events = events.size();
    LabelId default_label = stream.labels.intern("V");
    (void)default_label;

    bool monotonic = true;
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].ts < events[i - 1].ts) {
            monotonic = false;
            break;
        }
    if (!monotonic) {
        stream.resorted = true;
        std::stable_sort(events.begin(), events.end(),
                         [](const RawEvent& a, const RawEvent& b) { return a.ts < b.ts; });
    }

    auto dense_id = [&stream](std::uint64_t orig) {
        auto it = stream.remap.find(orig);
        if (it != stream.remap.end()) return it->second;
        VertexId id = static_cast<VertexId>(stream.remap.size());
        stream.remap.emplace(orig, id);
        return id;
    };

    std::unordered_map<VertexId, LabelId> current_label;
    UpdateBatch batch;
    std::int64_t current_bucket = 0;
    bool have_bucket = false;
    for (const RawEvent& ev : events) {
        std::int64_t bucket = bucket_of(ev.ts, granularity);
        if (!have_bucket || bucket != current_bucket) {
            if (have_bucket) stream.batches.push_back(std::move(batch));
            batch = UpdateBatch{};
            batch.step = static_cast<std::uint32_t>(stream.batches.size() + 1);
            current_bucket = bucket;
            have_bucket = true;
        }
        VertexId s = dense_id(ev.src);
        VertexId d = dense_id(ev.dst);
        batch.events.push_back(UpdateEvent::edge_add(s, d));
        if (!ev.label.empty()) {
            LabelId lid = stream.labels.intern(ev.label);
            auto it = current_label.find(s);
            if (it == current_label.end() || it->second != lid) {
                batch.events.push_back(UpdateEvent::relabel(s, lid));
                current_label[s] = lid;
            }
        }
    }
    if (have_bucket) stream.batches.push_back(std::move(batch));
    stream.num_vertices = stream.remap.size();
    return stream;
}

}  // namespace igpm
