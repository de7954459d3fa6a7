#include "analysis/figures.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "common/text.hpp"

namespace analysis {

std::vector<ExportRow> read_export_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read export file " + path);
    std::vector<ExportRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto trimmed = common::trim(line);
        if (trimmed.empty() || trimmed.rfind("t,", 0) == 0) continue;  // header
        auto f = common::split(trimmed, ',');
        if (f.size() != 6)
            throw std::runtime_error(path + " line " + std::to_string(lineno) + ": want 6 columns");
        ExportRow row;
        if (!common::parse_i64(f[0], row.t) || !common::parse_f64(f[4], row.value) ||
            !common::parse_i64(f[5], row.resolution_s))
            throw std::runtime_error(path + " line " + std::to_string(lineno) + ": unparsable row");
        row.host = f[1];
        row.metric = f[2];
        row.group = f[3];
        rows.push_back(std::move(row));
    }
    return rows;
}

UtilisationSeries select_series(const std::vector<ExportRow>& rows, const std::string& metric,
                                const std::optional<std::string>& group, const std::optional<std::string>& host,
                                SeriesKind kind) {
    std::map<int64_t, double> by_t;
    for (const auto& row : rows) {
        if (row.metric != metric) continue;
        if (group && row.group != *group) continue;
        if (host && row.host != *host) continue;
        by_t[row.t] += row.value;
    }
    UtilisationSeries series;
    series.kind = kind;
    for (const auto& [t, v] : by_t) series.points.push_back(SeriesPoint{t, v});
    series.interval_s = infer_interval(series.points);
    return series;
}

namespace {

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,series,value,marker\n";
    return out;
}

}  // namespace

void write_series_csv(const std::string& path,
                      const std::vector<std::pair<std::string, const UtilisationSeries*>>& series,
                      const std::vector<std::pair<std::string, int64_t>>& markers) {
    auto out = open_out(path);
    for (const auto& [name, s] : series) {
        for (const auto& p : s->points) out << p.t << ',' << name << ',' << format_value(p.value) << ",0\n";
    }
    for (size_t i = 0; i < markers.size(); ++i)
        out << markers[i].second << ',' << markers[i].first << ',' << i << ",1\n";
}

void write_diff_csv(const std::string& path, const DiffSeries& diff,
                    const std::vector<std::pair<std::string, int64_t>>& markers) {
    auto out = open_out(path);
    for (const auto& p : diff.points) out << p.t << ",diff," << format_value(p.value) << ",0\n";
    for (size_t i = 0; i < markers.size(); ++i)
        out << markers[i].second << ',' << markers[i].first << ',' << i << ",1\n";
}

void write_overhead_csv(const std::string& path, const OverheadReport& report) {
    auto out = open_out(path);
    for (size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        out << i << ',' << row.mode << ',' << format_value(row.percent_diff) << ",0\n";
    }
}

FigureOutputs write_figures(const std::string& export_csv, const std::string& records_csv,
                            const std::string& out_dir, const FilterSpec& filter) {
    auto rows = read_export_csv(export_csv);
    auto records = harness::read_records_csv(records_csv);

    UtilisationSeries total = select_series(rows, "cpu.total", std::nullopt, std::nullopt, SeriesKind::TotalBusy);
    UtilisationSeries attributed =
        select_series(rows, "cpu.attributed", std::nullopt, std::nullopt, SeriesKind::Attributed);
    if (total.points.empty()) throw std::runtime_error("export has no cpu.total series");
    if (attributed.points.empty()) throw std::runtime_error("export has no cpu.attributed series");
    // The two series are emitted on the same cadence; align the inferred
    // intervals so a sparse attributed series still subtracts cleanly.
    int64_t interval = std::max(total.interval_s, attributed.interval_s);
    total.interval_s = attributed.interval_s = interval;

    std::vector<std::pair<std::string, int64_t>> markers;
    std::vector<int64_t> marker_times;
    for (const auto& r : records) {
        markers.emplace_back("job.start", r.start_t);
        markers.emplace_back("job.end", r.end_t);
        marker_times.push_back(r.start_t);
        marker_times.push_back(r.end_t);
    }

    DiffSeries diff = utilisation_difference(total, attributed);
    FilterResult filtered = filter_transients(diff, marker_times, filter);

    FigureOutputs out;
    out.fig1 = out_dir + "/fig1.csv";
    out.fig2 = out_dir + "/fig2.csv";
    out.fig3a = out_dir + "/fig3a.csv";
    out.fig3b = out_dir + "/fig3b.csv";
    out.removed_samples = filtered.removed;

    write_overhead_csv(out.fig1, overhead_report(records));
    write_series_csv(out.fig2, {{"cpu.total", &total}, {"cpu.attributed", &attributed}}, markers);
    write_diff_csv(out.fig3a, diff, markers);
    write_diff_csv(out.fig3b, filtered.filtered, markers);
    return out;
}

}  // namespace analysis
