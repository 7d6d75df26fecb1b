#include "igpm/workload.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "igpm/rng.hpp"

namespace igpm {

const char* model_name(WorkloadSpec::Model model) {
    switch (model) {
        case WorkloadSpec::Model::ErdosRenyi: return "erdos-renyi";
        case WorkloadSpec::Model::PreferentialAttachment: return "preferential-attachment";
        case WorkloadSpec::Model::PlantedPatterns: return "planted-patterns";
    }
    return "?";
}

std::optional<WorkloadSpec::Model> parse_model(std::string_view name) {
    if (name == "erdos-renyi") return WorkloadSpec::Model::ErdosRenyi;
    if (name == "preferential-attachment") return WorkloadSpec::Model::PreferentialAttachment;
    if (name == "planted-patterns") return WorkloadSpec::Model::PlantedPatterns;
    return std::nullopt;
}

std::string WorkloadSpec::serialize() const {
    std::ostringstream out;
    out << model_name(model) << ";n=" << n << ";steps=" << steps << ";eps=" << edges_per_step
        << ";planted=" << planted << ";seed=" << seed;
    return out.str();
}

std::optional<WorkloadSpec> WorkloadSpec::parse(const std::string& text) {
    WorkloadSpec spec;
    std::istringstream in(text);
    std::string part;
    if (!std::getline(in, part, ';')) return std::nullopt;
    auto model = parse_model(part);
    if (!model) return std::nullopt;
    spec.model = *model;
    while (std::getline(in, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) return std::nullopt;
        std::string key = part.substr(0, eq);
        std::uint64_t value = std::stoull(part.substr(eq + 1));
        if (key == "n") spec.n = value;
        else if (key == "steps") spec.steps = static_cast<std::uint32_t>(value);
        else if (key == "eps") spec.edges_per_step = value;
        else if (key == "planted") spec.planted = value;
        else if (key == "seed") spec.seed = value;
        else return std::nullopt;
    }
    return spec;
}

namespace {

std::string edge_line(std::uint64_t src, std::uint64_t dst, std::uint64_t ts) {
    return std::to_string(src) + " " + std::to_string(dst) + " " + std::to_string(ts);
}

GeneratedWorkload generate_erdos_renyi(const WorkloadSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("workload: erdos-renyi needs n >= 2");
    GeneratedWorkload out;
    out.spec = spec;
    Rng rng(spec.seed);
    std::set<std::pair<std::uint64_t, std::uint64_t>> emitted;
    for (std::uint32_t step = 1; step <= spec.steps; ++step) {
        for (std::size_t e = 0; e < spec.edges_per_step; ++e) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                std::uint64_t u = rng.below(spec.n);
                std::uint64_t v = rng.below(spec.n);
                if (u == v) continue;
                auto key = std::minmax(u, v);
                if (emitted.count(key)) continue;
                emitted.insert(key);
                out.lines.push_back(edge_line(u, v, step));
                break;
            }
        }
    }
    return out;
}

GeneratedWorkload generate_preferential_attachment(const WorkloadSpec& spec) {
    if (spec.n < 4) throw std::invalid_argument("workload: preferential-attachment needs n >= 4");
    GeneratedWorkload out;
    out.spec = spec;
    Rng rng(spec.seed);

    // plan the full graph: seed triangle, then each vertex attaches two edges
    // to degree-proportional targets
    std::vector<std::pair<std::uint64_t, std::uint64_t>> planned = {{0, 1}, {1, 2}, {2, 0}};
    std::vector<std::uint64_t> endpoint_pool = {0, 1, 1, 2, 2, 0};
    for (std::uint64_t v = 3; v < spec.n; ++v) {
        std::uint64_t first = endpoint_pool[rng.below(endpoint_pool.size())];
        std::uint64_t second = first;
        for (int attempt = 0; attempt < 50 && second == first; ++attempt)
            second = endpoint_pool[rng.below(endpoint_pool.size())];
        planned.emplace_back(v, first);
        endpoint_pool.push_back(v);
        endpoint_pool.push_back(first);
        if (second != first) {
            planned.emplace_back(v, second);
            endpoint_pool.push_back(v);
            endpoint_pool.push_back(second);
        }
    }

    std::size_t budget = static_cast<std::size_t>(spec.steps) * spec.edges_per_step;
    std::size_t count = std::min(budget, planned.size());
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t ts = 1 + i / spec.edges_per_step;
        out.lines.push_back(edge_line(planned[i].first, planned[i].second, ts));
    }
    return out;
}

GeneratedWorkload generate_planted(const WorkloadSpec& spec) {
    if (spec.planted == 0) throw std::invalid_argument("workload: planted count must be >= 1");
    if (spec.n < 3 * spec.planted + 2)
        throw std::invalid_argument("workload: n too small for planted triangles");
    if (spec.steps < 3) throw std::invalid_argument("workload: planted needs >= 3 steps");

    GeneratedWorkload out;
    out.spec = spec;
    Rng rng(spec.seed);

    // background vertices [0, n_bg); each planted triangle gets 3 private
    // vertices above that, kept disconnected from the background so its
    // completion is unambiguous ground truth
    std::uint64_t n_bg = spec.n - 3 * spec.planted;
    std::vector<std::vector<std::string>> per_step(spec.steps + 1);

    for (std::size_t p = 0; p < spec.planted; ++p) {
        VertexId base = static_cast<VertexId>(n_bg + 3 * p);
        auto completion =
            static_cast<std::uint32_t>(3 + (spec.steps - 3) * (p + 1) / (spec.planted + 1));
        per_step[completion - 2].push_back(edge_line(base, base + 1, completion - 2));
        per_step[completion - 1].push_back(edge_line(base + 1, base + 2, completion - 1));
        per_step[completion].push_back(edge_line(base + 2, base, completion));
        out.ground_truth.push_back({{base, base + 1, base + 2}, completion});
    }

    std::set<std::pair<std::uint64_t, std::uint64_t>> emitted;
    for (std::uint32_t step = 1; step <= spec.steps; ++step) {
        std::size_t quota = spec.edges_per_step > per_step[step].size()
                                ? spec.edges_per_step - per_step[step].size()
                                : 0;
        for (std::size_t e = 0; e < quota; ++e) {
            for (int attempt = 0; attempt < 200; ++attempt) {
                std::uint64_t u = rng.below(n_bg);
                std::uint64_t v = rng.below(n_bg);
                if (u == v) continue;
                auto key = std::minmax(u, v);
                if (emitted.count(key)) continue;
                emitted.insert(key);
                per_step[step].push_back(edge_line(u, v, step));
                break;
            }
        }
    }
    for (std::uint32_t step = 1; step <= spec.steps; ++step)
        for (std::string& line : per_step[step]) out.lines.push_back(std::move(line));
    return out;
}

}  // namespace

GeneratedWorkload generate_workload(const WorkloadSpec& spec) {
    switch (spec.model) {
        case WorkloadSpec::Model::ErdosRenyi: return generate_erdos_renyi(spec);
        case WorkloadSpec::Model::PreferentialAttachment:
            return generate_preferential_attachment(spec);
        case WorkloadSpec::Model::PlantedPatterns: return generate_planted(spec);
    }
    throw std::invalid_argument("workload: unknown model");
}

void write_workload(const GeneratedWorkload& workload, const std::string& edge_path,
                    const std::string& sidecar_path) {
    std::ofstream out(edge_path);
    if (!out) throw std::runtime_error("workload: cannot write " + edge_path);
    out << "# " << workload.spec.serialize() << "\n";
    for (const std::string& line : workload.lines) out << line << "\n";
    if (!sidecar_path.empty()) {
        nlohmann::json j;
        j["workload"] = workload.spec.serialize();
        j["planted"] = nlohmann::json::array();
        for (const PlantedTriangle& t : workload.ground_truth)
            j["planted"].push_back({{"vertices", {t.vertices[0], t.vertices[1], t.vertices[2]}},
                                    {"completion_step", t.completion_step}});
        std::ofstream side(sidecar_path);
        if (!side) throw std::runtime_error("workload: cannot write " + sidecar_path);
        side << j.dump(2) << "\n";
    }
}

std::vector<PlantedTriangle> load_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("workload: cannot open sidecar " + path);
    nlohmann::json j;
    in >> j;
    std::vector<PlantedTriangle> out;
    for (const auto& jt : j.at("planted")) {
        PlantedTriangle t;
        const auto& verts = jt.at("vertices");
        for (int i = 0; i < 3; ++i) t.vertices[i] = verts.at(i).get<VertexId>();
        t.completion_step = jt.at("completion_step").get<std::uint32_t>();
        out.push_back(t);
    }
    return out;
}

EdgeStream stream_from_workload(const GeneratedWorkload& workload) {
    EdgeStream stream;
    stream.source_id = workload.spec.serialize();
    stream.labels.intern("V");
    stream.num_events = workload.lines.size();

    UpdateBatch batch;
    std::int64_t current_ts = 0;
    bool have_ts = false;
    auto dense_id = [&stream](std::uint64_t orig) {
        auto it = stream.remap.find(orig);
        if (it != stream.remap.end()) return it->second;
        VertexId id = static_cast<VertexId>(stream.remap.size());
        stream.remap.emplace(orig, id);
        return id;
    };
    for (const std::string& line : workload.lines) {
        std::istringstream ls(line);
        std::uint64_t src, dst;
        std::int64_t ts;
        ls >> src >> dst >> ts;
        if (!have_ts || ts != current_ts) {
            if (have_ts) stream.batches.push_back(std::move(batch));
            batch = UpdateBatch{};
            batch.step = static_cast<std::uint32_t>(stream.batches.size() + 1);
            current_ts = ts;
            have_ts = true;
        }
        batch.events.push_back(UpdateEvent::edge_add(dense_id(src), dense_id(dst)));
    }
    if (have_ts) stream.batches.push_back(std::move(batch));
    stream.num_vertices = stream.remap.size();
    return stream;
}

}  // namespace igpm
