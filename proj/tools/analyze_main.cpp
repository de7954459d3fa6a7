#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "analysis/figures.hpp"
#include "common/text.hpp"

namespace {

void print_mode_stats(const analysis::OverheadReport& report) {
    for (const auto& [mode, s] : report.per_mode) {
        std::printf("%-8s n=%-4zu min=%+.2f%% max=%+.2f%% mean=%+.2f%% median=%+.2f%%\n", mode.c_str(), s.count,
                    s.min_pd, s.max_pd, s.mean_pd, s.median_pd);
    }
}

// Reads a fig-style CSV back into a diff series (rows with series "diff").
analysis::DiffSeries read_diff_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    analysis::DiffSeries diff;
    std::string line;
    while (std::getline(in, line)) {
        auto trimmed = common::trim(line);
        if (trimmed.empty() || trimmed.rfind("t,", 0) == 0) continue;
        auto f = common::split(trimmed, ',');
        if (f.size() != 4 || f[1] != "diff" || f[3] != "0") continue;
        analysis::SeriesPoint p;
        if (!common::parse_i64(f[0], p.t) || !common::parse_f64(f[2], p.value))
            throw std::runtime_error(path + ": unparsable row '" + std::string(trimmed) + "'");
        diff.points.push_back(p);
    }
    diff.interval_s = analysis::infer_interval(diff.points);
    return diff;
}

// Marker timestamps from either a JobRecord CSV or an export CSV carrying
// job.start / job.end metrics.
std::vector<int64_t> read_markers(const std::string& path) {
    std::ifstream probe(path);
    std::string header;
    std::getline(probe, header);
    std::vector<int64_t> markers;
    if (common::trim(header).rfind("job_id,", 0) == 0) {
        for (const auto& r : harness::read_records_csv(path)) {
            markers.push_back(r.start_t);
            markers.push_back(r.end_t);
        }
    } else {
        for (const auto& row : analysis::read_export_csv(path)) {
            if (row.metric == "job.start" || row.metric == "job.end") markers.push_back(row.t);
        }
    }
    return markers;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offline analysis of harness records and collector exports"};
    app.require_subcommand(1);

    auto* overhead = app.add_subcommand("overhead", "per-mode expected-vs-observed statistics");
    std::string records_path, out_path;
    overhead->add_option("--records", records_path, "JobRecord CSV")->required();
    overhead->add_option("--out", out_path, "also write per-job rows as CSV");

    auto* diff = app.add_subcommand("diff", "total minus attributed utilisation");
    std::string total_path, attr_path, metric_total = "cpu.total", metric_attr = "cpu.attributed";
    std::string diff_out = "diff.csv";
    diff->add_option("--total", total_path, "export CSV holding the total series")->required();
    diff->add_option("--attributed", attr_path, "export CSV holding the attributed series")->required();
    diff->add_option("--metric-total", metric_total, "metric name of the total series");
    diff->add_option("--metric-attr", metric_attr, "metric name of the attributed series");
    diff->add_option("--out", diff_out, "output CSV");

    auto* filter = app.add_subcommand("filter", "drop samples near job start/end markers");
    std::string filter_diff_path, markers_path, filter_out = "filtered.csv";
    int window = 1;
    filter->add_option("--diff", filter_diff_path, "diff CSV (from `analyze diff`)")->required();
    filter->add_option("--markers", markers_path, "JobRecord CSV or export CSV with job.start/job.end")->required();
    filter->add_option("--window", window, "half-width in sampling intervals");
    filter->add_option("--out", filter_out, "output CSV");

    auto* figures = app.add_subcommand("figures", "emit fig1/fig2/fig3a/fig3b data files");
    std::string export_dir, fig_records, fig_out = ".";
    int fig_window = 1;
    figures->add_option("--export-dir", export_dir, "directory holding metrics.csv")->required();
    figures->add_option("--records", fig_records, "JobRecord CSV")->required();
    figures->add_option("--out", fig_out, "output directory");
    figures->add_option("--window", fig_window, "transient filter half-width in intervals");

    CLI11_PARSE(app, argc, argv);

    try {
        if (overhead->parsed()) {
            auto report = analysis::overhead_report(harness::read_records_csv(records_path));
            print_mode_stats(report);
            if (!out_path.empty()) analysis::write_overhead_csv(out_path, report);
        } else if (diff->parsed()) {
            auto total_rows = analysis::read_export_csv(total_path);
            auto attr_rows = attr_path == total_path ? total_rows : analysis::read_export_csv(attr_path);
            auto total = analysis::select_series(total_rows, metric_total, std::nullopt, std::nullopt,
                                                 analysis::SeriesKind::TotalBusy);
            auto attributed = analysis::select_series(attr_rows, metric_attr, std::nullopt, std::nullopt,
                                                      analysis::SeriesKind::Attributed);
            if (total.points.empty()) throw std::runtime_error("no '" + metric_total + "' rows in " + total_path);
            if (attributed.points.empty())
                throw std::runtime_error("no '" + metric_attr + "' rows in " + attr_path);
            int64_t interval = std::max(total.interval_s, attributed.interval_s);
            total.interval_s = attributed.interval_s = interval;
            auto d = analysis::utilisation_difference(total, attributed);
            analysis::write_diff_csv(diff_out, d, {});
            auto stats = analysis::balance_statistics(d);
            std::printf("diff: %zu samples, mean=%+.3f mean_abs=%.3f max_abs=%.3f (+%zu/-%zu) -> %s\n",
                        d.points.size(), stats.mean, stats.mean_abs, stats.max_abs, stats.positive,
                        stats.negative, diff_out.c_str());
        } else if (filter->parsed()) {
            auto d = read_diff_csv(filter_diff_path);
            auto markers = read_markers(markers_path);
            auto result = analysis::filter_transients(d, markers, analysis::FilterSpec{window});
            analysis::write_diff_csv(filter_out, result.filtered, {});
            std::printf("filter: removed %zu of %zu samples", result.removed, d.points.size());
            if (!result.filtered.points.empty()) {
                auto before = analysis::balance_statistics(d);
                auto after = analysis::balance_statistics(result.filtered);
                std::printf(", max_abs %.3f -> %.3f", before.max_abs, after.max_abs);
            }
            std::printf(" -> %s\n", filter_out.c_str());
        } else if (figures->parsed()) {
            auto out = analysis::write_figures(export_dir + "/metrics.csv", fig_records, fig_out,
                                               analysis::FilterSpec{fig_window});
            std::printf("figures: %s %s %s %s (filtered %zu transient samples)\n", out.fig1.c_str(),
                        out.fig2.c_str(), out.fig3a.c_str(), out.fig3b.c_str(), out.removed_samples);
        }
    } catch (const std::exception& e) {
        std::cerr << "analyze: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
