#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace igpm {

using VertexId = std::uint32_t;
using LabelId = std::int32_t;

constexpr LabelId kNoLabel = -1;

// Interned label strings. LabelId equality is exact string equality.
class LabelTable {
public:
    LabelId intern(std::string_view s);
    LabelId find(std::string_view s) const;  // kNoLabel if unknown
    const std::string& name(LabelId id) const;
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, LabelId> ids_;
};

enum class UpdateKind { EdgeAdd, EdgeRemove, VertexLabelUpdate };

struct UpdateEvent {
    UpdateKind kind = UpdateKind::EdgeAdd;
    VertexId u = 0;
    VertexId v = 0;              // dst for edge kinds, unused for relabel
    LabelId new_label = kNoLabel;

    static UpdateEvent edge_add(VertexId a, VertexId b) { return {UpdateKind::EdgeAdd, a, b, kNoLabel}; }
    static UpdateEvent edge_remove(VertexId a, VertexId b) { return {UpdateKind::EdgeRemove, a, b, kNoLabel}; }
    static UpdateEvent relabel(VertexId a, LabelId l) { return {UpdateKind::VertexLabelUpdate, a, 0, l}; }
};

struct UpdateBatch {
    std::uint32_t step = 0;
    std::vector<UpdateEvent> events;
};

struct ApplyResult {
    std::vector<VertexId> touched;   // endpoints of edge events + relabeled vertices, sorted unique
    std::size_t duplicate_adds = 0;  // EdgeAdds that were already present (idempotent no-ops)
    std::vector<bool> effective;     // per event: did it change the graph
};

// Labeled temporal graph. Storage is directed (out/in lists); matching and all
// degree/neighbor queries go through the view selected at construction
// (undirected merge by default). Parallel edges are collapsed; self-loops are
// allowed and count once toward degree.
class TemporalGraph {
public:
    explicit TemporalGraph(bool directed_matching = false, std::string default_label = "V");
    TemporalGraph(LabelTable labels, bool directed_matching = false, std::string default_label = "V");

    ApplyResult apply_batch(const UpdateBatch& batch);

    // Single-event primitives. apply_batch is built on these; tests use them
    // to assemble fixtures without stepping.
    VertexId add_vertex(VertexId v, LabelId label);
    VertexId ensure_vertex(VertexId v);            // auto-create with the default label
    bool add_edge(VertexId u, VertexId v);         // false if already present under the matching view
    void remove_edge(VertexId u, VertexId v);      // throws if absent
    void set_label(VertexId v, LabelId label);     // throws on unknown vertex

    bool has_vertex(VertexId v) const;
    bool has_edge(VertexId u, VertexId v) const;   // matching view
    std::size_t num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const;                 // matching view
    std::uint32_t step() const { return step_; }
    void set_step(std::uint32_t s) { step_ = s; }

    std::size_t degree(VertexId v) const;          // throws on unknown vertex
    const std::vector<VertexId>& neighbors(VertexId v) const;  // matching view, sorted
    LabelId label(VertexId v) const;               // throws on unknown vertex
    const std::vector<VertexId>& vertices_with_label(LabelId l) const;  // sorted
    std::vector<VertexId> vertex_ids() const;      // sorted list of live ids
    VertexId id_bound() const { return static_cast<VertexId>(labels_of_.size()); }

    bool directed_matching() const { return directed_; }
    LabelId default_label() const { return default_label_; }
    LabelTable& labels() { return labels_; }
    const LabelTable& labels() const { return labels_; }

private:
    void grow_to(VertexId v);

    LabelTable labels_;
    LabelId default_label_;
    bool directed_;
    std::uint32_t step_ = 0;
    std::size_t num_vertices_ = 0;
    std::size_t num_directed_edges_ = 0;
    std::size_t num_undirected_edges_ = 0;

    std::vector<LabelId> labels_of_;               // kNoLabel marks a nonexistent id
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::vector<VertexId>> in_;
    std::vector<std::vector<VertexId>> und_;       // merged view, sorted unique
    std::vector<std::vector<VertexId>> by_label_;  // label -> sorted vertex ids
};

enum class StepGranularity { Hour, Day, Raw };

struct EdgeStream {
    std::vector<UpdateBatch> batches;
    LabelTable labels;
    std::size_t num_vertices = 0;   // distinct endpoints after remapping
    std::size_t num_events = 0;     // edge events (one per data line)
    bool resorted = false;          // input timestamps were non-monotonic
    std::string source_id;          // file path or workload spec string
    std::unordered_map<std::uint64_t, VertexId> remap;  // original id -> dense id

    // Endpoints of edge events plus relabel targets of one batch, without
    // applying it. Matches what apply_batch reports as touched.
    static std::vector<VertexId> peek_touched(const UpdateBatch& batch);
};

// Parses whitespace-separated `src dst timestamp [label]` lines (SNAP temporal
// format), buckets timestamps by the granularity, and renumbers vertices
// densely in order of first appearance in timestamp order. `#` comments are
// skipped; malformed lines throw with the line number.
EdgeStream ingest_edge_stream(const std::string& path, StepGranularity granularity);

}  // namespace igpm
