#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "igpm/pem.hpp"

namespace igpm {

// Windowed totals of several traces from the same workload + pattern, with
// pairwise ratios. Throws when the traces do not share a workload.
struct CompareReport {
    struct Row {
        std::string mode;
        WindowSummary window;
    };
    std::uint32_t from_step = 0, to_step = 0;
    std::vector<Row> rows;

    // ratio helpers (numerator mode / denominator mode); 0 when a mode is absent
    double elapsed_ratio(const std::string& num, const std::string& den) const;
    double recomputed_ratio(const std::string& num, const std::string& den) const;
    double patterns_ratio(const std::string& num, const std::string& den) const;

    std::string to_table() const;
    void write_csv(std::ostream& out) const;
};

CompareReport compare_runs(const std::vector<const RunTrace*>& traces, std::uint32_t from_step = 0,
                           std::uint32_t to_step = 0);  // 0,0 = widest common window

}  // namespace igpm
