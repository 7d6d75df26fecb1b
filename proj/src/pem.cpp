#include "igpm/pem.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace igpm {

namespace {

constexpr const char* kSchema = "igpm-trace v1";
constexpr double kWorkUnitSeconds = 1e-8;  // virtual seconds per work unit

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

double reward_from(double t_seconds, double cap) {
    if (t_seconds <= 0) return cap;
    return std::min(1.0 / t_seconds, cap);
}

using Clock = std::chrono::steady_clock;

std::uint64_t ns_since(Clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

RunTrace make_trace(const EdgeStream& stream, const QueryPattern& pattern, const PemConfig& cfg) {
    RunTrace trace;
    trace.mode = mode_name(cfg.mode);
    trace.pattern = pattern.name;
    trace.workload_id = stream.source_id;
    trace.seed = cfg.rng_seed;
    trace.k = cfg.k;
    trace.initial_c = cfg.initial_c;
    trace.epsilon = cfg.epsilon;
    return trace;
}

Observation observe(const TemporalGraph& g, const CommunityAssignment* assignment,
                    const std::vector<VertexId>& touched) {
    Observation obs;
    if (g.num_vertices() > 0)
        obs.density = static_cast<double>(g.num_edges()) / static_cast<double>(g.num_vertices());
    if (assignment && assignment->num_communities() > 0) {
        std::set<std::int32_t> hit;
        for (VertexId v : touched) {
            std::int32_t c = assignment->community_of(v);
            if (c >= 0) hit.insert(c);
        }
        obs.affected_fraction = static_cast<double>(hit.size()) /
                                static_cast<double>(assignment->num_communities());
    }
    return obs;
}

RunTrace run_batch_mode(const EdgeStream& stream, const QueryPattern& pattern,
                        const PemConfig& cfg, const StepObserver* observer) {
    RunTrace trace = make_trace(stream, pattern, cfg);
    TemporalGraph g(stream.labels, cfg.directed);
    MatchIndex index(!cfg.directed);
    std::set<std::vector<VertexId>> prev_mappings;

    std::size_t total = stream.batches.size();
    if (cfg.total_steps > 0) total = std::min<std::size_t>(total, cfg.total_steps);
    for (std::size_t i = 0; i < total; ++i) {
        auto t0 = Clock::now();
        g.apply_batch(stream.batches[i]);

        std::uint64_t work = 0;
        auto results = batch_rematch(g, pattern, cfg.matcher, cfg.k, cfg.rwr, &work);

        std::set<std::vector<VertexId>> cur_mappings;
        index.clear();
        for (MatchResult& r : results) {
            cur_mappings.insert(r.mapping);
            index.add(std::move(r));
        }

        TraceRow row;
        row.metrics.step = static_cast<std::uint32_t>(i + 1);
        row.metrics.recomputed_vertices = g.num_vertices();
        row.metrics.work_units = work;
        for (const auto& m : cur_mappings)
            if (!prev_mappings.count(m)) ++row.metrics.new_patterns;
        for (const auto& m : prev_mappings)
            if (!cur_mappings.count(m)) ++row.metrics.invalidated_patterns;
        row.metrics.total_patterns = index.size();
        row.metrics.exact_patterns = index.exact_count();
        row.c = cfg.initial_c;
        row.obs = observe(g, nullptr, {});
        double t_sec = cfg.wallclock_reward ? static_cast<double>(ns_since(t0)) * 1e-9
                                            : static_cast<double>(work) * kWorkUnitSeconds;
        row.reward = reward_from(t_sec, cfg.agent.reward_cap);
        row.metrics.elapsed_ns = ns_since(t0);
        prev_mappings = std::move(cur_mappings);
        if (observer && observer->on_step) observer->on_step(g, index, row.metrics, {});
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

RunTrace run_incremental_mode(const EdgeStream& stream, const QueryPattern& pattern,
                              const PemConfig& cfg, const StepObserver* observer) {
    const bool adaptive = cfg.mode == RunMode::Adaptive;
    RunTrace trace = make_trace(stream, pattern, cfg);

    TemporalGraph g(stream.labels, cfg.directed);
    ProximityStore store(g, cfg.rwr);
    MatchIndex index(!cfg.directed);
    index.set_tombstones(cfg.tombstones);

    AgentConfig agent_cfg = cfg.agent;
    agent_cfg.epsilon = cfg.epsilon;
    std::optional<DqnAgent> agent;
    if (adaptive) agent.emplace(agent_cfg, cfg.rng_seed);

    int c = cfg.initial_c;
    std::optional<CommunityAssignment> assignment;
    std::vector<VertexId> next_recompute;
    bool have_next = false;

    std::size_t total = stream.batches.size();
    if (cfg.total_steps > 0) total = std::min<std::size_t>(total, cfg.total_steps);
    for (std::size_t i = 0; i < total; ++i) {
        const UpdateBatch& batch = stream.batches[i];
        auto t0 = Clock::now();
        std::uint64_t store_work0 = store.work_units();

        ApplyResult applied = g.apply_batch(batch);
        store.repair(applied.touched);  // incremental RWR maintenance

        std::uint64_t repair_work = 0;
        std::size_t invalidated = 0;
        for (std::size_t e = 0; e < batch.events.size(); ++e) {
            if (!applied.effective[e]) continue;  // duplicate adds change nothing
            const UpdateEvent& ev = batch.events[e];
            RepairReport report;
            switch (ev.kind) {
                case UpdateKind::EdgeAdd:
                    report = repair_on_edge_add(g, store, index, pattern, ev.u, ev.v, cfg.matcher);
                    break;
                case UpdateKind::EdgeRemove:
                    report = repair_on_edge_remove(g, store, index, pattern, ev.u, ev.v,
                                                   cfg.matcher);
                    break;
                case UpdateKind::VertexLabelUpdate:
                    report = repair_on_label_update(g, store, index, pattern, ev.u, cfg.matcher);
                    break;
            }
            repair_work += report.work_units;
            invalidated += report.invalidated.size();
        }

        std::vector<VertexId> recompute;
        if (cfg.cluster_after_touch) {
            assignment = recursive_louvain(g, static_cast<std::size_t>(c), cfg.louvain);
            recompute = recompute_set_from_communities(*assignment, applied.touched);
        } else {
            recompute = have_next ? std::move(next_recompute) : applied.touched;
            have_next = false;
        }

        std::uint64_t store_work_pre_igpm = store.work_units();
        StepMetrics metrics =
            igpm_step(g, store, index, pattern, recompute, cfg.matcher, cfg.k);
        metrics.step = static_cast<std::uint32_t>(i + 1);
        metrics.invalidated_patterns = invalidated;
        metrics.exact_patterns = index.exact_count();
        metrics.total_patterns = index.size();

        // IGPM cost for the reward: RWR maintenance + repairs + the match pass
        std::uint64_t igpm_work =
            metrics.work_units + repair_work + (store_work_pre_igpm - store_work0);
        double t_sec = cfg.wallclock_reward ? static_cast<double>(ns_since(t0)) * 1e-9
                                            : static_cast<double>(igpm_work) * kWorkUnitSeconds;
        double reward = reward_from(t_sec, cfg.agent.reward_cap);

        Observation obs = observe(g, assignment ? &*assignment : nullptr, applied.touched);

        int action = -1;
        if (adaptive) {
            Action act = agent->step(obs, reward);
            action = static_cast<int>(act);
            int c_max = std::max(cfg.c_min, static_cast<int>(g.num_vertices()));
            c = apply_action(c, act, cfg.c_min, c_max);
        }

        if (!cfg.cluster_after_touch) {
            assignment = recursive_louvain(g, static_cast<std::size_t>(c), cfg.louvain);
            if (i + 1 < total) {
                next_recompute = recompute_set_from_communities(
                    *assignment, EdgeStream::peek_touched(stream.batches[i + 1]));
                have_next = true;
            }
        }

        TraceRow row;
        metrics.work_units = igpm_work;
        metrics.elapsed_ns = ns_since(t0);  // whole step including clustering
        row.metrics = metrics;
        row.c = c;
        row.obs = obs;
        row.reward = reward;
        row.action = action;
        if (observer && observer->on_step) observer->on_step(g, index, row.metrics, recompute);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

}  // namespace

const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::Batch: return "batch";
        case RunMode::Naive: return "naive";
        case RunMode::Adaptive: return "adaptive";
    }
    return "?";
}

std::optional<RunMode> parse_mode(std::string_view name) {
    if (name == "batch") return RunMode::Batch;
    if (name == "naive") return RunMode::Naive;
    if (name == "adaptive") return RunMode::Adaptive;
    return std::nullopt;
}

RunTrace run_stream(const EdgeStream& stream, const QueryPattern& pattern, const PemConfig& cfg,
                    const StepObserver* observer) {
    if (stream.batches.empty()) throw std::invalid_argument("run_stream: empty stream");
    if (cfg.mode == RunMode::Batch) return run_batch_mode(stream, pattern, cfg, observer);
    return run_incremental_mode(stream, pattern, cfg, observer);
}

void RunTrace::write_csv(std::ostream& out) const {
    out << "# " << kSchema << "\n";
    out << "# workload " << workload_id << "\n";
    out << "# pattern " << pattern << "\n";
    out << "# mode " << mode << "\n";
    out << "# seed " << seed << "\n";
    out << "# k " << k << "\n";
    out << "# initial_c " << initial_c << "\n";
    out << "# epsilon " << fmt_double(epsilon) << "\n";
    if (recall >= 0) out << "# recall " << fmt_double(recall) << "\n";
    out << "step,mode,c,elapsed_ns,work_units,recomputed_vertices,new_patterns,"
           "invalidated_patterns,total_patterns,exact_patterns,density,affected_fraction,"
           "reward,action\n";
    for (const TraceRow& r : rows) {
        out << r.metrics.step << ',' << mode << ',' << r.c << ',' << r.metrics.elapsed_ns << ','
            << r.metrics.work_units << ',' << r.metrics.recomputed_vertices << ','
            << r.metrics.new_patterns << ',' << r.metrics.invalidated_patterns << ','
            << r.metrics.total_patterns << ',' << r.metrics.exact_patterns << ','
            << fmt_double(r.obs.density) << ',' << fmt_double(r.obs.affected_fraction) << ','
            << fmt_double(r.reward) << ',' << r.action << "\n";
    }
}

void RunTrace::write_json(std::ostream& out) const {
    nlohmann::json j;
    j["schema"] = kSchema;
    j["workload"] = workload_id;
    j["pattern"] = pattern;
    j["mode"] = mode;
    j["seed"] = seed;
    j["k"] = k;
    j["initial_c"] = initial_c;
    j["epsilon"] = epsilon;
    if (recall >= 0) j["recall"] = recall;
    j["steps"] = nlohmann::json::array();
    for (const TraceRow& r : rows) {
        j["steps"].push_back({{"step", r.metrics.step},
                              {"c", r.c},
                              {"elapsed_ns", r.metrics.elapsed_ns},
                              {"work_units", r.metrics.work_units},
                              {"recomputed_vertices", r.metrics.recomputed_vertices},
                              {"new_patterns", r.metrics.new_patterns},
                              {"invalidated_patterns", r.metrics.invalidated_patterns},
                              {"total_patterns", r.metrics.total_patterns},
                              {"exact_patterns", r.metrics.exact_patterns},
                              {"density", r.obs.density},
                              {"affected_fraction", r.obs.affected_fraction},
                              {"reward", r.reward},
                              {"action", r.action}});
    }
    out << j.dump(2) << "\n";
}

RunTrace RunTrace::read_csv(std::istream& in) {
    RunTrace trace;
    std::string line;
    bool saw_schema = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key;
            ls >> key;
            if (key == "igpm-trace") {
                saw_schema = true;
            } else if (key == "workload") {
                std::string rest;
                std::getline(ls, rest);
                std::size_t start = rest.find_first_not_of(' ');
                trace.workload_id = start == std::string::npos ? "" : rest.substr(start);
            } else if (key == "pattern") {
                ls >> trace.pattern;
            } else if (key == "mode") {
                ls >> trace.mode;
            } else if (key == "seed") {
                ls >> trace.seed;
            } else if (key == "k") {
                ls >> trace.k;
            } else if (key == "initial_c") {
                ls >> trace.initial_c;
            } else if (key == "epsilon") {
                ls >> trace.epsilon;
            } else if (key == "recall") {
                ls >> trace.recall;
            }
            continue;
        }
        if (line.rfind("step,", 0) == 0) continue;  // column header
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 14)
            throw std::runtime_error("trace csv: bad row '" + line + "'");
        TraceRow r;
        r.metrics.step = static_cast<std::uint32_t>(std::stoul(fields[0]));
        r.c = std::stoi(fields[2]);
        r.metrics.elapsed_ns = std::stoull(fields[3]);
        r.metrics.work_units = std::stoull(fields[4]);
        r.metrics.recomputed_vertices = std::stoull(fields[5]);
        r.metrics.new_patterns = std::stoull(fields[6]);
        r.metrics.invalidated_patterns = std::stoull(fields[7]);
        r.metrics.total_patterns = std::stoull(fields[8]);
        r.metrics.exact_patterns = std::stoull(fields[9]);
        r.obs.density = std::stod(fields[10]);
        r.obs.affected_fraction = std::stod(fields[11]);
        r.reward = std::stod(fields[12]);
        r.action = std::stoi(fields[13]);
        trace.rows.push_back(std::move(r));
    }
    if (!saw_schema) throw std::runtime_error("trace csv: missing schema header");
    return trace;
}

std::string RunTrace::strip_timing(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("step,", 0) == 0) {
            out << line << "\n";
            continue;
        }
        // remove the elapsed_ns column (index 3)
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        bool first = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == 3) continue;
            if (!first) out << ',';
            out << fields[i];
            first = false;
        }
        out << "\n";
    }
    return out.str();
}

WindowSummary measure_window(const RunTrace& trace, std::uint32_t from_step,
                             std::uint32_t to_step) {
    if (from_step < 1 || to_step < from_step || to_step > trace.rows.size())
        throw std::invalid_argument("measure_window: window [" + std::to_string(from_step) + "," +
                                    std::to_string(to_step) + "] out of range for " +
                                    std::to_string(trace.rows.size()) + " steps");
    WindowSummary s;
    s.from_step = from_step;
    s.to_step = to_step;
    for (std::uint32_t i = from_step; i <= to_step; ++i) {
        const TraceRow& r = trace.rows[i - 1];
        s.elapsed_ns += r.metrics.elapsed_ns;
        s.work_units += r.metrics.work_units;
        s.recomputed_vertices += r.metrics.recomputed_vertices;
        s.new_patterns += r.metrics.new_patterns;
        s.invalidated_patterns += r.metrics.invalidated_patterns;
    }
    s.total_patterns_at_end = trace.rows[to_step - 1].metrics.total_patterns;
    s.exact_patterns_at_end = trace.rows[to_step - 1].metrics.exact_patterns;
    return s;
}

}  // namespace igpm
