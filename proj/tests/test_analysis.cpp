#include <doctest.h>

#include <sys/stat.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "analysis/figures.hpp"
#include "analysis/overhead.hpp"
#include "analysis/series.hpp"

using analysis::DiffSeries;
using analysis::SeriesPoint;
using analysis::UtilisationSeries;

namespace {

UtilisationSeries series_of(std::vector<SeriesPoint> points, int64_t interval,
                            analysis::SeriesKind kind = analysis::SeriesKind::Other) {
    UtilisationSeries s;
    s.points = std::move(points);
    s.interval_s = interval;
    s.kind = kind;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("overhead report: zero-overhead records average to zero") {
    std::vector<harness::JobRecord> records;
    for (int i = 0; i < 5; ++i)
        records.push_back({"j" + std::to_string(i), "local", 0, 0, 30, 30, 30, "ok"});
    auto report = analysis::overhead_report(records);
    CHECK(report.per_mode["local"].mean_pd == doctest::Approx(0.0));
    CHECK(report.per_mode["local"].max_pd == doctest::Approx(0.0));
    CHECK(report.per_mode["local"].count == 5);
}

TEST_CASE("overhead report: grouped by mode, failures excluded, mean cross-checked") {
    std::vector<harness::JobRecord> records{
        {"a", "local", 0, 0, 30, 30, 30, "ok"},    {"b", "local", 0, 0, 31, 30, 31, "ok"},
        {"c", "wrapped", 0, 0, 33, 30, 33, "ok"},  {"d", "wrapped", 0, 0, 36, 30, 36, "ok"},
        {"e", "local", 0, 0, 99, 30, 99, "failed(1)"},
    };
    auto report = analysis::overhead_report(records);
    CHECK(report.rows.size() == 4);

    // Naive recomputation of the local mean.
    double naive = (harness::percent_difference(30, 30) + harness::percent_difference(30, 31)) / 2.0;
    CHECK(report.per_mode["local"].mean_pd == doctest::Approx(naive));
    CHECK(report.per_mode["wrapped"].mean_pd == doctest::Approx((10.0 + 20.0) / 2.0));
    CHECK(report.per_mode["wrapped"].median_pd == doctest::Approx(15.0));

    CHECK_THROWS_AS(analysis::overhead_report({{"x", "local", 0, 0, 1, 1, 1, "failed(1)"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(analysis::overhead_report({}), std::invalid_argument);
}

TEST_CASE("utilisation difference: arithmetic and gap propagation") {
    auto total = series_of({{0, 50}, {15, 60}, {30, 70}}, 15);
    auto attributed = series_of({{0, 45}, {15, 50}, {30, 70}}, 15);
    auto diff = analysis::utilisation_difference(total, attributed);
    REQUIRE(diff.points.size() == 3);
    CHECK(diff.points[0].value == doctest::Approx(5.0));
    CHECK(diff.points[1].value == doctest::Approx(10.0));
    CHECK(diff.points[2].value == doctest::Approx(0.0));

    // identical series -> all zeros
    auto zero = analysis::utilisation_difference(total, total);
    for (const auto& p : zero.points) CHECK(p.value == doctest::Approx(0.0));

    // attributed missing t=15 -> diff omits it
    auto gappy = series_of({{0, 45}, {30, 70}}, 15);
    auto with_gap = analysis::utilisation_difference(total, gappy);
    REQUIRE(with_gap.points.size() == 2);
    CHECK(with_gap.points[0].t == 0);
    CHECK(with_gap.points[1].t == 30);

    // mismatched intervals -> alignment error
    auto other = series_of({{0, 1}}, 30);
    CHECK_THROWS_AS(analysis::utilisation_difference(total, other), std::invalid_argument);
}

TEST_CASE("utilisation difference is antisymmetric") {
    auto a = series_of({{0, 50}, {15, 60}, {30, 10}}, 15);
    auto b = series_of({{0, 45}, {15, 80}, {30, 10}}, 15);
    auto ab = analysis::utilisation_difference(a, b);
    auto ba = analysis::utilisation_difference(b, a);
    REQUIRE(ab.points.size() == ba.points.size());
    for (size_t i = 0; i < ab.points.size(); ++i)
        CHECK(ab.points[i].value == doctest::Approx(-ba.points[i].value));
}

TEST_CASE("transient filter: identity without markers") {
    DiffSeries diff;
    diff.interval_s = 15;
    for (int i = 0; i < 10; ++i) diff.points.push_back({i * 15, static_cast<double>(i)});
    auto result = analysis::filter_transients(diff, {}, {1});
    CHECK(result.removed == 0);
    CHECK(result.filtered.points.size() == 10);
}

TEST_CASE("transient filter: window arithmetic around one marker") {
    DiffSeries diff;
    diff.interval_s = 15;
    for (int64_t t = 55; t <= 145; t += 15) diff.points.push_back({t, 1.0});  // 55,70,...,145
    auto result = analysis::filter_transients(diff, {100}, {1});
    // |t-100| <= 15 removes 85, 100(absent), 115 -> here 85 and 115... plus 100 itself if present
    CHECK(result.removed == 2);
    for (const auto& p : result.filtered.points) CHECK(std::llabs(p.t - 100) > 15);

    // window 0 keeps everything except exact coincidences
    auto exact = analysis::filter_transients(diff, {115}, {0});
    CHECK(exact.removed == 1);
}

TEST_CASE("transient filter removes exactly the in-window samples and no others") {
    DiffSeries diff;
    diff.interval_s = 15;
    for (int64_t t = 0; t <= 600; t += 15) diff.points.push_back({t, 1.0});
    std::vector<int64_t> markers{150, 300, 459};
    auto result = analysis::filter_transients(diff, markers, {1});
    size_t expect_removed = 0;
    for (const auto& p : diff.points) {
        bool in_window = false;
        for (int64_t m : markers) in_window |= std::llabs(p.t - m) <= 15;
        if (in_window) ++expect_removed;
    }
    CHECK(result.removed == expect_removed);
    CHECK(result.filtered.points.size() + result.removed == diff.points.size());
}

TEST_CASE("balance statistics") {
    DiffSeries zeros;
    zeros.interval_s = 15;
    zeros.points = {{0, 0.0}, {15, 0.0}};
    auto z = analysis::balance_statistics(zeros);
    CHECK(z.mean == 0.0);
    CHECK(z.mean_abs == 0.0);
    CHECK(z.max_abs == 0.0);
    CHECK(z.positive == 0);
    CHECK(z.negative == 0);

    DiffSeries pm;
    pm.interval_s = 15;
    pm.points = {{0, 10.0}, {15, -10.0}};
    auto s = analysis::balance_statistics(pm);
    CHECK(s.mean == doctest::Approx(0.0));
    CHECK(s.mean_abs == doctest::Approx(10.0));
    CHECK(s.max_abs == doctest::Approx(10.0));
    CHECK(s.positive == 1);
    CHECK(s.negative == 1);

    CHECK_THROWS_AS(analysis::balance_statistics(DiffSeries{}), std::invalid_argument);
}

TEST_CASE("attribution lag timeline: filtering strictly shrinks the peaks") {
    // A job runs [150, 300]; the total series sees it immediately, the
    // attributed series lags the start by one 15 s interval (the Fig. 3a
    // transient shape). The oracle diff is 5 everywhere except a spike at
    // the boundary sample.
    UtilisationSeries total, attributed;
    total.interval_s = attributed.interval_s = 15;
    for (int64_t t = 0; t <= 450; t += 15) {
        bool in_job = t >= 150 && t <= 300;
        total.points.push_back({t, in_job ? 85.0 : 5.0});
        bool attr_in_job = t >= 165 && t <= 300;  // one interval late
        attributed.points.push_back({t, attr_in_job ? 80.0 : 0.0});
    }
    auto diff = analysis::utilisation_difference(total, attributed);
    auto before = analysis::balance_statistics(diff);
    CHECK(before.max_abs == doctest::Approx(80.0));  // the t=150 spike

    auto result = analysis::filter_transients(diff, {150, 300}, {1});
    auto after = analysis::balance_statistics(result.filtered);
    CHECK(after.max_abs < before.max_abs);          // filtering never increases max_abs
    CHECK(after.max_abs == doctest::Approx(5.0));   // balanced remainder
    CHECK(after.mean_abs < before.mean_abs);
    CHECK(result.removed == 6);  // 135..165 and 285..315
}

TEST_CASE("plot data files: row counts and determinism") {
    UtilisationSeries a = series_of({{0, 1}, {15, 2}, {30, 3}}, 15, analysis::SeriesKind::TotalBusy);
    UtilisationSeries b = series_of({{0, 1}, {15, 1}, {30, 1}}, 15, analysis::SeriesKind::Attributed);
    std::vector<std::pair<std::string, int64_t>> markers{{"job.start", 0}, {"job.end", 30}};

    std::string path = "/tmp/analysis_fig_test.csv";
    analysis::write_series_csv(path, {{"cpu.total", &a}, {"cpu.attributed", &b}}, markers);
    std::string first = slurp(path);
    analysis::write_series_csv(path, {{"cpu.total", &a}, {"cpu.attributed", &b}}, markers);
    CHECK(slurp(path) == first);  // byte-identical on identical inputs

    int value_rows = 0, marker_rows = 0;
    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,series,value,marker");
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        if (line.back() == '1') ++marker_rows;
        else ++value_rows;
    }
    CHECK(value_rows == 6);   // n*2 value rows
    CHECK(marker_rows == 2);  // m marker rows
    ::unlink(path.c_str());
}

TEST_CASE("export CSV reading and series selection") {
    std::string path = "/tmp/analysis_export_test.csv";
    {
        std::ofstream out(path);
        out << "t,host,metric,group,value,resolution_s\n";
        out << "100,n1,cpu.total,,50,1\n";
        out << "115,n1,cpu.total,,60,1\n";
        out << "100,n1,cpu.attributed,all,45,1\n";
        out << "115,n1,cpu.attributed,all,40,1\n";
        out << "115,n1,cpu.attributed,other,5,1\n";
        out << "100,n1,mem.attributed,all,1048576,1\n";
    }
    auto rows = analysis::read_export_csv(path);
    CHECK(rows.size() == 6);

    auto total = analysis::select_series(rows, "cpu.total", std::nullopt, std::nullopt,
                                         analysis::SeriesKind::TotalBusy);
    REQUIRE(total.points.size() == 2);
    CHECK(total.interval_s == 15);

    // groups sum at matching timestamps
    auto attributed = analysis::select_series(rows, "cpu.attributed", std::nullopt, std::nullopt,
                                              analysis::SeriesKind::Attributed);
    REQUIRE(attributed.points.size() == 2);
    CHECK(attributed.points[1].value == doctest::Approx(45.0));

    auto only_all = analysis::select_series(rows, "cpu.attributed", std::string("all"), std::nullopt,
                                            analysis::SeriesKind::Attributed);
    CHECK(only_all.points[1].value == doctest::Approx(40.0));
    ::unlink(path.c_str());
}

TEST_CASE("figure emission end to end on synthetic inputs") {
    std::string dir = "/tmp/analysis_figs_test";
    ::mkdir(dir.c_str(), 0755);
    std::string export_csv = dir + "/metrics.csv";
    std::string records_csv = dir + "/records.csv";
    {
        std::ofstream out(export_csv);
        out << "t,host,metric,group,value,resolution_s\n";
        for (int64_t t = 0; t <= 300; t += 15) {
            bool in_job = t >= 90 && t <= 180;
            out << t << ",n1,cpu.total,," << (in_job ? 90 : 5) << ",1\n";
            out << t << ",n1,cpu.attributed,all," << (t >= 105 && t <= 180 ? 85 : 0) << ",1\n";
        }
    }
    {
        std::vector<harness::JobRecord> records{{"job-000", "local", 90, 90, 180, 88, 90, "ok"}};
        harness::write_records_csv(records_csv, records);
    }

    auto out = analysis::write_figures(export_csv, records_csv, dir, {1});
    CHECK(out.removed_samples > 0);
    for (const std::string& f : {out.fig1, out.fig2, out.fig3a, out.fig3b}) {
        std::string text = slurp(f);
        CHECK(text.rfind("t,series,value,marker", 0) == 0);
        CHECK(text.size() > 30);
    }
    // fig3b is fig3a minus the marker-window samples
    CHECK(slurp(out.fig3b).size() < slurp(out.fig3a).size());

    for (const std::string& f : {out.fig1, out.fig2, out.fig3a, out.fig3b}) ::unlink(f.c_str());
    ::unlink(export_csv.c_str());
    ::unlink(records_csv.c_str());
    ::rmdir(dir.c_str());
}
