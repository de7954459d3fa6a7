#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "loadgen/job.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"state-machine CPU/memory/network load emulator"};
    std::string config_path, table_path, report_path;
    std::string tag = "-";
    std::vector<std::string> overrides;
    std::optional<uint64_t> seed;
    app.add_option("--config", config_path, "key=value parameter file");
    app.add_option("--set", overrides, "override key=value (repeatable)");
    app.add_option("--table", table_path, "transition table file (default: deterministic staging order)");
    app.add_option("--report", report_path, "append the run report as a CSV row");
    app.add_option("--seed", seed, "RNG seed (overrides rng_seed from config)");
    app.add_option("--tag", tag, "job identification token, visible on the command line");
    CLI11_PARSE(app, argc, argv);

    try {
        std::string config_text = config_path.empty() ? std::string() : read_file(config_path);
        loadgen::LoadParams params = loadgen::parse_config(config_text, overrides);
        if (seed) params.rng_seed = *seed;

        loadgen::TransitionTable table = table_path.empty()
                                             ? loadgen::TransitionTable::deterministic_default()
                                             : loadgen::TransitionTable::parse(read_file(table_path));

        loadgen::LoadReport report = loadgen::run_job(params, table);
        std::printf("expected_s=%.3f observed_s=%.3f bytes_sent=%llu bytes_allocated=%llu visits=%s\n",
                    report.expected_total_s, report.observed_total_s,
                    static_cast<unsigned long long>(report.bytes_sent),
                    static_cast<unsigned long long>(report.bytes_allocated),
                    loadgen::visit_sequence_string(report.visit_sequence).c_str());
        if (!report_path.empty()) loadgen::append_report_csv(report_path, tag, report);
        if (!report.ok()) {
            std::cerr << "loadgen: " << report.error << "\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "loadgen: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
