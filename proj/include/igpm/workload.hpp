#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "igpm/graph.hpp"

namespace igpm {

// Synthetic timestamped edge streams; one timestamp unit = one step under
// raw granularity. Fully reproducible from the spec string.
struct WorkloadSpec {
    enum class Model { ErdosRenyi, PreferentialAttachment, PlantedPatterns };

    Model model = Model::ErdosRenyi;
    std::size_t n = 100;              // vertex budget
    std::uint32_t steps = 10;
    std::size_t edges_per_step = 5;
    std::size_t planted = 0;          // planted triangles (PlantedPatterns only)
    std::uint64_t seed = 1;

    std::string serialize() const;    // doubles as the workload id
    static std::optional<WorkloadSpec> parse(const std::string& text);
};

const char* model_name(WorkloadSpec::Model model);
std::optional<WorkloadSpec::Model> parse_model(std::string_view name);

struct PlantedTriangle {
    std::array<VertexId, 3> vertices;
    std::uint32_t completion_step = 0;  // step of the third edge
};

struct GeneratedWorkload {
    WorkloadSpec spec;
    std::vector<std::string> lines;              // "src dst ts"
    std::vector<PlantedTriangle> ground_truth;   // PlantedPatterns only
};

GeneratedWorkload generate_workload(const WorkloadSpec& spec);

// Writes the edge list, plus the JSON ground-truth sidecar when requested.
void write_workload(const GeneratedWorkload& workload, const std::string& edge_path,
                    const std::string& sidecar_path = "");

std::vector<PlantedTriangle> load_sidecar(const std::string& path);

// Builds the stream in memory, identical to writing + ingesting with raw
// granularity.
EdgeStream stream_from_workload(const GeneratedWorkload& workload);

}  // namespace igpm
