#include "igpm/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace igpm {

namespace {

const CompareReport::Row* find_row(const std::vector<CompareReport::Row>& rows,
                                   const std::string& mode) {
    for (const auto& r : rows)
        if (r.mode == mode) return &r;
    return nullptr;
}

double safe_ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

}  // namespace

double CompareReport::elapsed_ratio(const std::string& num, const std::string& den) const {
    const Row* a = find_row(rows, num);
    const Row* b = find_row(rows, den);
    if (!a || !b) return 0;
    return safe_ratio(static_cast<double>(a->window.elapsed_ns),
                      static_cast<double>(b->window.elapsed_ns));
}

double CompareReport::recomputed_ratio(const std::string& num, const std::string& den) const {
    const Row* a = find_row(rows, num);
    const Row* b = find_row(rows, den);
    if (!a || !b) return 0;
    return safe_ratio(static_cast<double>(a->window.recomputed_vertices),
                      static_cast<double>(b->window.recomputed_vertices));
}

double CompareReport::patterns_ratio(const std::string& num, const std::string& den) const {
    const Row* a = find_row(rows, num);
    const Row* b = find_row(rows, den);
    if (!a || !b) return 0;
    return safe_ratio(static_cast<double>(a->window.total_patterns_at_end),
                      static_cast<double>(b->window.total_patterns_at_end));
}

std::string CompareReport::to_table() const {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %14s %14s %12s %12s %12s\n", "mode", "elapsed_ms",
                  "work_units", "recomputed", "patterns", "exact");
    out << "window: steps " << from_step << ".." << to_step << "\n" << buf;
    for (const Row& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-10s %14.3f %14llu %12zu %12zu %12zu\n", r.mode.c_str(),
                      static_cast<double>(r.window.elapsed_ns) / 1e6,
                      static_cast<unsigned long long>(r.window.work_units),
                      r.window.recomputed_vertices, r.window.total_patterns_at_end,
                      r.window.exact_patterns_at_end);
        out << buf;
    }
    for (const Row& a : rows)
        for (const Row& b : rows) {
            if (a.mode == b.mode) continue;
            std::snprintf(buf, sizeof(buf),
                          "%s/%s: elapsed %.3f, work %.3f, recomputed %.3f, patterns %.3f\n",
                          a.mode.c_str(), b.mode.c_str(), elapsed_ratio(a.mode, b.mode),
                          safe_ratio(static_cast<double>(a.window.work_units),
                                     static_cast<double>(b.window.work_units)),
                          recomputed_ratio(a.mode, b.mode), patterns_ratio(a.mode, b.mode));
            out << buf;
        }
    return out.str();
}

void CompareReport::write_csv(std::ostream& out) const {
    out << "mode,from_step,to_step,elapsed_ns,work_units,recomputed_vertices,new_patterns,"
           "invalidated_patterns,total_patterns,exact_patterns\n";
    for (const Row& r : rows)
        out << r.mode << ',' << from_step << ',' << to_step << ',' << r.window.elapsed_ns << ','
            << r.window.work_units << ',' << r.window.recomputed_vertices << ','
            << r.window.new_patterns << ',' << r.window.invalidated_patterns << ','
            << r.window.total_patterns_at_end << ',' << r.window.exact_patterns_at_end << "\n";
}

CompareReport compare_runs(const std::vector<const RunTrace*>& traces, std::uint32_t from_step,
                           std::uint32_t to_step) {
    if (traces.empty()) throw std::invalid_argument("compare_runs: no traces");
    for (const RunTrace* t : traces) {
        if (t->workload_id != traces.front()->workload_id)
            throw std::invalid_argument("compare_runs: workload mismatch: '" + t->workload_id +
                                        "' vs '" + traces.front()->workload_id + "'");
        if (t->pattern != traces.front()->pattern)
            throw std::invalid_argument("compare_runs: pattern mismatch: '" + t->pattern +
                                        "' vs '" + traces.front()->pattern + "'");
    }
    std::size_t common = traces.front()->rows.size();
    for (const RunTrace* t : traces) common = std::min(common, t->rows.size());
    if (from_step == 0 && to_step == 0) {
        from_step = 1;
        to_step = static_cast<std::uint32_t>(common);
    }
    CompareReport report;
    report.from_step = from_step;
    report.to_step = to_step;
    for (const RunTrace* t : traces)
        report.rows.push_back({t->mode, measure_window(*t, from_step, to_step)});
    return report;
}

}  // namespace igpm
