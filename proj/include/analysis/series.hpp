#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace analysis {

enum class SeriesKind { TotalBusy, Attributed, Idle, Other };

struct SeriesPoint {
    int64_t t = 0;
    double value = 0.0;
};

// Uniformly spaced (t, percent) samples; missing timestamps are gaps and
// stay missing.
struct UtilisationSeries {
    std::vector<SeriesPoint> points;  // strictly increasing t
    int64_t interval_s = 0;
    SeriesKind kind = SeriesKind::Other;
};

struct DiffSeries {
    std::vector<SeriesPoint> points;  // total - attributed, at common timestamps
    int64_t interval_s = 0;
};

// Pointwise total - attributed at timestamps present in both series; gaps
// propagate. Throws std::invalid_argument when interval_s differs.
DiffSeries utilisation_difference(const UtilisationSeries& total, const UtilisationSeries& attributed);

struct FilterSpec {
    int window_intervals = 1;  // samples within +- window_intervals * interval_s of a marker are removed
};

struct FilterResult {
    DiffSeries filtered;
    size_t removed = 0;
};

// Removes every sample with |t - m| <= window_intervals * interval_s for
// any marker m. An empty marker set is the identity.
FilterResult filter_transients(const DiffSeries& diff, const std::vector<int64_t>& markers,
                               const FilterSpec& spec);

struct BalanceStats {
    double mean = 0.0;
    double mean_abs = 0.0;
    double max_abs = 0.0;
    size_t positive = 0;
    size_t negative = 0;
};

// Throws std::invalid_argument on an empty series.
BalanceStats balance_statistics(const DiffSeries& diff);

// The averaging interval implied by a point set: the smallest positive
// spacing between consecutive timestamps (0 for fewer than 2 points).
int64_t infer_interval(const std::vector<SeriesPoint>& points);

}  // namespace analysis
