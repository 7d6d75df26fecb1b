#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "igpm/graph.hpp"

namespace igpm {

// Small labeled query graph. qids are dense from 0; the pattern must be
// connected and have at least one edge.
struct QueryPattern {
    std::vector<LabelId> vertex_labels;                       // index = qid
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> adj;              // built by finalize()
    std::vector<std::vector<std::uint32_t>> automorphisms;    // built by finalize()
    std::string name;

    std::size_t size() const { return vertex_labels.size(); }
    void finalize();                     // builds adj + automorphisms, validates
    std::vector<LabelId> label_set() const;  // sorted unique labels
};

// Lexicographically smallest image of a qid->vertex mapping over the
// pattern's automorphism group: the identity of a pattern instance.
std::vector<std::uint32_t> canonical_mapping(const std::vector<std::uint32_t>& mapping,
                                             const QueryPattern& pattern);

enum class BuiltinPattern { Triangle, Square, Star5, K4 };

std::optional<BuiltinPattern> parse_builtin(std::string_view name);
const char* builtin_name(BuiltinPattern kind);

// triangle = C3, square = C4, star5 = one hub (qid 0) with 4 leaves,
// k4 = complete graph on 4 vertices. All vertices labeled "V".
QueryPattern make_pattern(BuiltinPattern kind, LabelTable& labels);

// JSON file format:
//   {"vertices": [{"id": 0, "label": "V"}, ...], "edges": [[0, 1], ...]}
QueryPattern load_pattern(const std::string& path, LabelTable& labels);
void save_pattern(const QueryPattern& pattern, const LabelTable& labels, const std::string& path);

}  // namespace igpm
