#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analysis/overhead.hpp"
#include "analysis/series.hpp"
#include "harness/records.hpp"

namespace analysis {

// One row of the collector's export CSV: t,host,metric,group,value,resolution_s
struct ExportRow {
    int64_t t = 0;
    std::string host;
    std::string metric;
    std::string group;
    double value = 0.0;
    int64_t resolution_s = 0;
};

std::vector<ExportRow> read_export_csv(const std::string& path);

// Collects the named metric (optionally a single group / host) into a
// series sorted by t; values for the same t across groups are summed.
// interval_s is inferred from the data.
UtilisationSeries select_series(const std::vector<ExportRow>& rows, const std::string& metric,
                                const std::optional<std::string>& group, const std::optional<std::string>& host,
                                SeriesKind kind);

// Tidy CSV: t,series,value,marker  (marker rows carry flag 1). Deterministic
// bytes for identical inputs.
void write_series_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const UtilisationSeries*>>& series,
                      const std::vector<std::pair<std::string, int64_t>>& markers);

void write_diff_csv(const std::string& path, const DiffSeries& diff,
                    const std::vector<std::pair<std::string, int64_t>>& markers);

void write_overhead_csv(const std::string& path, const OverheadReport& report);

struct FigureOutputs {
    std::string fig1;   // per-job overhead by mode
    std::string fig2;   // total vs attributed utilisation
    std::string fig3a;  // utilisation difference with job markers
    std::string fig3b;  // the same after transient filtering
    size_t removed_samples = 0;
};

// Reproduces the figure data files from a collector export and a records
// CSV. Throws std::runtime_error when required series are missing.
FigureOutputs write_figures(const std::string& export_csv, const std::string& records_csv,
                            const std::string& out_dir, const FilterSpec& filter);

}  // namespace analysis
