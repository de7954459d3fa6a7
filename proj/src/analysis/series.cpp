#include "analysis/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace analysis {

DiffSeries utilisation_difference(const UtilisationSeries& total, const UtilisationSeries& attributed) {
    if (total.interval_s != attributed.interval_s)
        throw std::invalid_argument("series intervals differ (" + std::to_string(total.interval_s) + " vs " +
                                    std::to_string(attributed.interval_s) + ")");
    std::map<int64_t, double> attr;
    for (const auto& p : attributed.points) attr.emplace(p.t, p.value);

    DiffSeries diff;
    diff.interval_s = total.interval_s;
    for (const auto& p : total.points) {
        auto it = attr.find(p.t);
        if (it == attr.end()) continue;  // gap in either input propagates
        diff.points.push_back(SeriesPoint{p.t, p.value - it->second});
    }
    return diff;
}

FilterResult filter_transients(const DiffSeries& diff, const std::vector<int64_t>& markers,
                               const FilterSpec& spec) {
    if (spec.window_intervals < 0) throw std::invalid_argument("window_intervals must be >= 0");
    const int64_t radius = static_cast<int64_t>(spec.window_intervals) * diff.interval_s;

    FilterResult result;
    result.filtered.interval_s = diff.interval_s;
    for (const auto& p : diff.points) {
        bool near_marker = false;
        for (int64_t m : markers) {
            if (std::llabs(p.t - m) <= radius) {
                near_marker = true;
                break;
            }
        }
        if (near_marker) ++result.removed;
        else result.filtered.points.push_back(p);
    }
    return result;
}

BalanceStats balance_statistics(const DiffSeries& diff) {
    if (diff.points.empty()) throw std::invalid_argument("empty diff series");
    BalanceStats stats;
    for (const auto& p : diff.points) {
        stats.mean += p.value;
        stats.mean_abs += std::abs(p.value);
        stats.max_abs = std::max(stats.max_abs, std::abs(p.value));
        if (p.value > 0.0) ++stats.positive;
        if (p.value < 0.0) ++stats.negative;
    }
    stats.mean /= static_cast<double>(diff.points.size());
    stats.mean_abs /= static_cast<double>(diff.points.size());
    return stats;
}

int64_t infer_interval(const std::vector<SeriesPoint>& points) {
    int64_t best = 0;
    for (size_t i = 1; i < points.size(); ++i) {
        int64_t gap = points[i].t - points[i - 1].t;
        if (gap > 0 && (best == 0 || gap < best)) best = gap;
    }
    return best;
}

}  // namespace analysis
