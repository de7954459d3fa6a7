#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <thread>

#include "harness/jobset.hpp"
#include "harness/markers.hpp"
#include "harness/runner.hpp"
#include "wire/transport.hpp"

#ifndef LOADGEN_BIN
#define LOADGEN_BIN "loadgen"
#endif

TEST_CASE("job set generation is deterministic under the seed") {
    auto a = harness::generate_job_set(50, 3.0, 10.0, 1 << 20, 8 << 20, 0.7, 4242);
    auto b = harness::generate_job_set(50, 3.0, 10.0, 1 << 20, 8 << 20, 0.7, 4242);
    REQUIRE(a.jobs.size() == 50);
    for (size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].job_id == b.jobs[i].job_id);
        CHECK(a.jobs[i].expected_s == b.jobs[i].expected_s);
        CHECK(a.jobs[i].params.net_seconds == b.jobs[i].params.net_seconds);
        CHECK(a.jobs[i].params.mem_bytes == b.jobs[i].params.mem_bytes);
        CHECK(a.jobs[i].params.rng_seed == b.jobs[i].params.rng_seed);
        CHECK(a.jobs[i].params.mem_bytes >= (1u << 20));
        CHECK(a.jobs[i].params.mem_bytes <= (8u << 20));
        CHECK(a.jobs[i].expected_s > 0);
    }
    CHECK(a.jobs[0].job_id == "job-000");
    auto c = harness::generate_job_set(50, 3.0, 10.0, 1 << 20, 8 << 20, 0.7, 4243);
    bool differs = false;
    for (size_t i = 0; i < a.jobs.size(); ++i) differs |= a.jobs[i].expected_s != c.jobs[i].expected_s;
    CHECK(differs);
}

TEST_CASE("job set mean matches the analytic Pareto mean") {
    // Oracle: each phase has mean alpha*xmin/(alpha-1) = 15, so expected_s
    // averages 2*15 = 30 across many jobs.
    auto set = harness::generate_job_set(10'000, 3.0, 10.0, 0, 0, 1.0, 7);
    double sum = 0.0;
    for (const auto& j : set.jobs) sum += static_cast<double>(j.expected_s);
    double mean = sum / 10'000.0;
    CHECK(std::abs(mean - 30.0) / 30.0 < 0.02);
}

TEST_CASE("job set generation rejects bad parameters") {
    CHECK_THROWS_AS(harness::generate_job_set(0, 3.0, 10.0, 0, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(harness::generate_job_set(5, -1.0, 10.0, 0, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(harness::generate_job_set(5, 3.0, 10.0, 9, 1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("percent difference") {
    CHECK(harness::percent_difference(100, 102) == doctest::Approx(2.0));
    CHECK(harness::percent_difference(100, 100) == doctest::Approx(0.0));
    CHECK(harness::percent_difference(200, 223) == doctest::Approx(11.5));
    CHECK_THROWS_AS(harness::percent_difference(0, 10), std::invalid_argument);
}

TEST_CASE("records CSV round trip") {
    std::vector<harness::JobRecord> records{
        {"job-000", "local", 100, 100, 125, 25, 25, "ok"},
        {"job-001", "wrapped", 130, 130, 161, 28, 31, "ok"},
        {"job-002", "local", 170, 170, 171, 10, 1, "failed(1)"},
    };
    std::string path = "/tmp/harness_records_test.csv";
    harness::write_records_csv(path, records);
    auto back = harness::read_records_csv(path);
    REQUIRE(back.size() == 3);
    CHECK(back[0].job_id == "job-000");
    CHECK(back[1].observed_s == 31);
    CHECK(back[2].ok() == false);
    CHECK(back[0].ok() == true);
    ::unlink(path.c_str());
}

TEST_CASE("master-slave run: sequential, monotone, never undercounts") {
    harness::JobSet set;
    set.jobs.push_back(harness::JobSpec{"job-000", {}, 1});
    set.jobs.back().params.cpu_seconds = 1.0;
    set.jobs.back().params.duty_p = 0.5;
    set.jobs.push_back(harness::JobSpec{"job-001", {}, 1});
    set.jobs.back().params.cpu_seconds = 1.0;

    harness::RunnerConfig config;
    config.loadgen_path = LOADGEN_BIN;
    config.settle_s = 2.0;
    config.marker_tag = "uttest";

    auto t0 = std::chrono::steady_clock::now();
    auto records = harness::run_master_slave(set, config);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.ok());
        CHECK(r.submit_t <= r.start_t);
        CHECK(r.start_t <= r.end_t);
        CHECK(r.observed_s >= r.expected_s);  // overhead is never negative
        CHECK(r.observed_s <= r.expected_s + 3);
    }
    CHECK(records[1].start_t >= records[0].end_t + 1);  // settle - 1s truncation
    CHECK(wall >= 2.0 * 1 + 2.0);                       // schedule arithmetic
}

TEST_CASE("master-slave run: wrapped mode injects the declared startup delay") {
    harness::JobSet set;
    set.jobs.push_back(harness::JobSpec{"job-000", {}, 1});
    set.jobs.back().params.cpu_seconds = 1.0;

    harness::RunnerConfig config;
    config.loadgen_path = LOADGEN_BIN;
    config.mode = harness::SubmissionMode::Wrapped;
    config.wrap_overhead_s = 2.0;
    config.settle_s = 0.0;

    auto records = harness::run_master_slave(set, config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].ok());
    CHECK(records[0].observed_s - records[0].expected_s >= 2 - 1);  // timer resolution slack
}

TEST_CASE("master-slave run: a failing job is flagged and the run continues") {
    harness::JobSet set;
    set.jobs.push_back(harness::JobSpec{"job-000", {}, 1});
    set.jobs.back().params.net_seconds = 1.0;  // no sink anywhere
    set.jobs.back().params.sink_addr = "127.0.0.1:1";
    set.jobs.back().params.connect_timeout_s = 0.3;
    set.jobs.push_back(harness::JobSpec{"job-001", {}, 1});
    set.jobs.back().params.cpu_seconds = 1.0;

    harness::RunnerConfig config;
    config.loadgen_path = LOADGEN_BIN;
    config.settle_s = 0.5;

    auto records = harness::run_master_slave(set, config);
    REQUIRE(records.size() == 2);
    CHECK(!records[0].ok());
    CHECK(records[1].ok());
}

TEST_CASE("master-slave run: a bad loadgen path is a flagged spawn error") {
    harness::JobSet set;
    set.jobs.push_back(harness::JobSpec{"job-000", {}, 1});
    harness::RunnerConfig config;
    config.loadgen_path = "/nonexistent/loadgen";
    config.settle_s = 0.0;
    auto records = harness::run_master_slave(set, config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].status.rfind("spawn-error", 0) == 0);
}

TEST_CASE("job markers: 2 metrics per record, timestamps straight from the records") {
    wire::TransportConfig recv_cfg;
    recv_cfg.addr = "127.0.0.1";
    recv_cfg.port = 0;
    wire::UdpReceiver receiver(recv_cfg);
    std::vector<wire::MetricPacket> got;
    std::thread rx([&] { receiver.run([&](const wire::MetricPacket& p) { got.push_back(p); }); });

    std::vector<harness::JobRecord> records;
    for (int i = 0; i < 50; ++i)
        records.push_back(harness::JobRecord{"job-" + std::to_string(i), "local", 100 + 60 * i, 100 + 60 * i,
                                             130 + 60 * i, 30, 30, "ok"});

    wire::TransportConfig send_cfg;
    send_cfg.addr = "127.0.0.1";
    send_cfg.port = receiver.port();
    wire::UdpSender sender(send_cfg);
    size_t sent = harness::emit_job_markers(records, sender, "masternode");
    CHECK(sent == 100);

    for (int i = 0; i < 300 && got.size() < 100; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    receiver.stop();
    rx.join();
    REQUIRE(got.size() == 100);
    CHECK(got[0].metrics[0].name == "job.start");
    CHECK(got[0].t == records[0].start_t);
    CHECK(got[1].metrics[0].name == "job.end");
    CHECK(got[1].t == records[0].end_t);
    CHECK(got[99].t == records[49].end_t);
}

TEST_CASE("job markers survive an offline collector") {
    // The CSV copy is written by the harness regardless; markers are
    // fire-and-forget toward a dead port.
    std::vector<harness::JobRecord> records{{"job-0", "local", 1, 1, 2, 1, 1, "ok"}};
    wire::TransportConfig cfg;
    cfg.addr = "127.0.0.1";
    cfg.port = 1;
    wire::UdpSender sender(cfg);
    CHECK(harness::emit_job_markers(records, sender, "h") == 2);
}
