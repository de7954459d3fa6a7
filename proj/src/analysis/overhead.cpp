#include "analysis/overhead.hpp"

#include <algorithm>
#include <stdexcept>

namespace analysis {

OverheadReport overhead_report(const std::vector<harness::JobRecord>& records) {
    OverheadReport report;
    std::map<std::string, std::vector<double>> diffs;

    for (const auto& r : records) {
        if (!r.ok()) continue;
        double pd = harness::percent_difference(static_cast<double>(r.expected_s),
                                                static_cast<double>(r.observed_s));
        report.rows.push_back(OverheadRow{r.job_id, r.mode, r.expected_s, r.observed_s, pd});
        diffs[r.mode].push_back(pd);
    }
    if (report.rows.empty()) throw std::invalid_argument("no successful job records");

    for (auto& [mode, values] : diffs) {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        ModeStats stats;
        stats.count = sorted.size();
        stats.min_pd = sorted.front();
        stats.max_pd = sorted.back();
        for (double v : sorted) stats.mean_pd += v;
        stats.mean_pd /= static_cast<double>(sorted.size());
        size_t mid = sorted.size() / 2;
        stats.median_pd = sorted.size() % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
        report.per_mode[mode] = stats;
    }
    return report;
}

}  // namespace analysis
