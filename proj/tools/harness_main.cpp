#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "common/net.hpp"
#include "common/text.hpp"
#include "harness/markers.hpp"
#include "harness/runner.hpp"

namespace {

std::string sibling_binary(const char* name) {
    char buf[4096];
    ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
    if (n <= 0) return name;
    buf[n] = '\0';
    std::string path(buf);
    size_t slash = path.rfind('/');
    return slash == std::string::npos ? std::string(name) : path.substr(0, slash + 1) + name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sequential master-slave job submission harness"};
    int jobs = 10;
    double alpha = 3.0, xmin = 10.0, duty = 0.7, settle = 45.0, wrap_overhead = 3.0;
    uint64_t seed = 1;
    std::string mem_range = "8388608..33554432";
    std::string mode = "local", records_path = "records.csv", emit, loadgen_path, sink_addr, marker = "gridjob";
    app.add_option("--jobs", jobs, "number of jobs to generate");
    app.add_option("--alpha", alpha, "Pareto shape for loading times");
    app.add_option("--xmin", xmin, "Pareto scale (minimum seconds per phase)");
    app.add_option("--mem", mem_range, "memory per job, bytes, as lo..hi");
    app.add_option("--duty", duty, "duty-cycle probability for CPU/network slots");
    app.add_option("--seed", seed, "job set generation seed");
    app.add_option("--settle", settle, "seconds between job completion and next submission");
    app.add_option("--mode", mode, "local|wrapped");
    app.add_option("--wrap-overhead", wrap_overhead, "declared startup delay for wrapped mode, seconds");
    app.add_option("--records", records_path, "output JobRecord CSV");
    app.add_option("--emit", emit, "host:port for job.start/job.end marker metrics");
    app.add_option("--loadgen", loadgen_path, "loadgen binary (default: next to this binary)");
    app.add_option("--sink", sink_addr, "byte sink host:port for network phases");
    app.add_option("--marker", marker, "command-line token tagged onto every job");
    CLI11_PARSE(app, argc, argv);

    try {
        size_t dots = mem_range.find("..");
        uint64_t mem_lo = 0, mem_hi = 0;
        if (dots == std::string::npos || !common::parse_u64(mem_range.substr(0, dots), mem_lo) ||
            !common::parse_u64(mem_range.substr(dots + 2), mem_hi))
            throw std::invalid_argument("--mem wants lo..hi in bytes, got '" + mem_range + "'");

        harness::JobSet set = harness::generate_job_set(jobs, alpha, xmin, mem_lo, mem_hi, duty, seed);

        harness::RunnerConfig config;
        config.mode = harness::mode_from_string(mode);
        config.wrap_overhead_s = wrap_overhead;
        config.settle_s = settle;
        config.loadgen_path = loadgen_path.empty() ? sibling_binary("loadgen") : loadgen_path;
        config.sink_addr = sink_addr;
        config.marker_tag = marker;

        std::fprintf(stderr, "harness: %d %s jobs, settle %.0fs, loadgen=%s\n", jobs, mode.c_str(), settle,
                     config.loadgen_path.c_str());
        auto records = harness::run_master_slave(set, config, [](const harness::JobRecord& r) {
            std::fprintf(stderr, "harness: %s expected=%llds observed=%llds status=%s\n", r.job_id.c_str(),
                         static_cast<long long>(r.expected_s), static_cast<long long>(r.observed_s),
                         r.status.c_str());
        });

        harness::write_records_csv(records_path, records);
        if (!emit.empty()) {
            auto hp = common::parse_host_port(emit);
            wire::TransportConfig transport;
            transport.addr = hp.host;
            transport.port = hp.port;
            wire::UdpSender sender(transport);
            harness::emit_job_markers(records, sender, common::local_hostname());
        }
        std::printf("harness: wrote %zu records to %s\n", records.size(), records_path.c_str());
    } catch (const std::exception& e) {
        std::cerr << "harness: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
