#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "igpm/agent.hpp"
#include "igpm/clustering.hpp"
#include "igpm/incremental.hpp"

namespace igpm {

enum class RunMode { Batch, Naive, Adaptive };

const char* mode_name(RunMode mode);
std::optional<RunMode> parse_mode(std::string_view name);

struct PemConfig {
    RunMode mode = RunMode::Adaptive;
    int initial_c = 8;
    int c_min = 2;                    // c_max tracks |V|
    std::uint32_t total_steps = 0;    // 0 = run the whole stream
    double epsilon = 0.5;
    std::size_t k = 10;               // 0 = unlimited results
    std::uint64_t rng_seed = 1;
    std::uint32_t warmup = 100;       // steps skipped by the default measure window
    bool directed = false;
    bool cluster_after_touch = false; // online variant: cluster after seeing the step's updates
    bool wallclock_reward = false;    // default reward uses the deterministic work counter
    bool tombstones = false;
    MatcherConfig matcher;
    RwrParams rwr;
    AgentConfig agent;
    LouvainParams louvain;
};

struct TraceRow {
    StepMetrics metrics;
    int c = 0;
    Observation obs;      // raw (pre-normalization) observation
    double reward = 0;
    int action = -1;      // 0 decrement, 1 increment, -1 none
};

struct RunTrace {
    std::string mode;
    std::string pattern;
    std::string workload_id;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    int initial_c = 0;
    double epsilon = 0;
    double recall = -1;   // filled when planted ground truth is available
    std::vector<TraceRow> rows;

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
    static RunTrace read_csv(std::istream& in);

    // CSV text with the wall-clock column removed, for byte comparisons.
    static std::string strip_timing(const std::string& csv_text);
};

struct WindowSummary {
    std::uint32_t from_step = 0, to_step = 0;
    std::uint64_t elapsed_ns = 0;
    std::uint64_t work_units = 0;
    std::size_t recomputed_vertices = 0;
    std::size_t new_patterns = 0;
    std::size_t invalidated_patterns = 0;
    std::size_t total_patterns_at_end = 0;
    std::size_t exact_patterns_at_end = 0;
};

// Totals over steps [from_step, to_step], 1-based inclusive. Throws when the
// window is empty or out of range.
WindowSummary measure_window(const RunTrace& trace, std::uint32_t from_step,
                             std::uint32_t to_step);

// Test/analysis hook, called after every completed step. The recompute set
// is the one the step actually matched from (empty in batch mode, which by
// definition recomputes everything).
struct StepObserver {
    std::function<void(const TemporalGraph&, const MatchIndex&, const StepMetrics&,
                       const std::vector<VertexId>&)>
        on_step;
};

// Replays the stream under the configured mode and returns the trace.
RunTrace run_stream(const EdgeStream& stream, const QueryPattern& pattern, const PemConfig& cfg,
                    const StepObserver* observer = nullptr);

}  // namespace igpm
