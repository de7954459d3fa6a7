#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cmath>
#include <thread>

#include "loadgen/job.hpp"
#include "loadgen/loaders.hpp"
#include "loadgen/pareto.hpp"
#include "loadgen/sink.hpp"
#include "procmon/provider.hpp"

using loadgen::LoadState;

namespace {

// Resident size of this process, read through the OS process table.
uint64_t own_resident_bytes() {
    procmon::OsProcProvider provider;
    auto scan = provider.snapshot();
    int64_t self = static_cast<int64_t>(::getpid());
    for (const auto& p : scan.processes)
        if (p.pid == self) return p.resident_bytes;
    return 0;
}

}  // namespace

TEST_CASE("config parsing: overrides take precedence") {
    auto p = loadgen::parse_config("cpu_seconds=10\nduty_p=0.5", {"duty_p=0.9"});
    CHECK(p.cpu_seconds == doctest::Approx(10.0));
    CHECK(p.duty_p == doctest::Approx(0.9));
    CHECK(p.net_seconds == 0.0);
    CHECK(p.slot_ms == 100);
}

TEST_CASE("config parsing: defaults, comments, errors") {
    auto p = loadgen::parse_config("", {});
    CHECK(p.net_seconds == 0.0);
    CHECK(p.mem_bytes == 0);
    CHECK(p.cpu_seconds == 0.0);
    CHECK(p.duty_p == 1.0);
    CHECK(p.slot_ms == 100);

    CHECK_NOTHROW(loadgen::parse_config("# a comment\n\n  cpu_seconds = 3 \n", {}));

    CHECK_THROWS_WITH_AS(loadgen::parse_config("duty_p=1.5", {}), "duty_p out of range [0,1]",
                         std::invalid_argument);
    CHECK_THROWS_AS(loadgen::parse_config("bogus_key=1", {}), std::invalid_argument);
    try {
        loadgen::parse_config("cpu_seconds=1\nmem_bytes=lots", {});
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("mem_bytes") != std::string::npos);
    }
}

TEST_CASE("pareto quantile: forced u=1 yields the scale minimum") {
    CHECK(loadgen::pareto_quantile(1.0, 3.0, 2.0) == doctest::Approx(2.0));
    CHECK(loadgen::pareto_quantile(1.0, 0.5, 7.0) == doctest::Approx(7.0));
    CHECK_THROWS_AS(loadgen::pareto_quantile(0.5, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(loadgen::pareto_quantile(0.5, 3.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(loadgen::pareto_quantile(0.0, 3.0, 2.0), std::invalid_argument);
}

TEST_CASE("pareto sampler matches the analytic mean and CDF") {
    // Oracle: mean = alpha*xmin/(alpha-1) = 3.0; CDF F(x) = 1-(xmin/x)^alpha.
    const double alpha = 3.0, xmin = 2.0;
    const size_t n = 1'000'000;
    loadgen::Rng rng(42);
    std::vector<double> samples(n);
    double sum = 0.0;
    for (auto& s : samples) {
        s = loadgen::sample_pareto(rng, alpha, xmin);
        CHECK(s >= xmin);
        sum += s;
    }
    double mean = sum / static_cast<double>(n);
    CHECK(std::abs(mean - 3.0) / 3.0 < 0.01);

    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double f = 1.0 - std::pow(xmin / samples[i], alpha);
        ks = std::max(ks, std::abs(f - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.002);
}

TEST_CASE("deterministic default table walks the staging order for every seed") {
    auto table = loadgen::TransitionTable::deterministic_default();
    CHECK(table.mode() == loadgen::TableMode::Deterministic);
    for (uint64_t seed : {0ULL, 1ULL, 99ULL, 0xDEADULL}) {
        loadgen::Rng rng(seed);
        std::vector<LoadState> visits{LoadState::Init};
        while (visits.back() != LoadState::Done) visits.push_back(table.next(visits.back(), rng));
        CHECK(visits == std::vector<LoadState>{LoadState::Init, LoadState::Network, LoadState::Memory,
                                               LoadState::Cpu, LoadState::Done});
    }
}

TEST_CASE("Done is absorbing") {
    auto table = loadgen::TransitionTable::deterministic_default();
    loadgen::Rng rng(1);
    CHECK(table.next(LoadState::Done, rng) == LoadState::Done);
}

TEST_CASE("table parsing and validation errors") {
    CHECK_NOTHROW(loadgen::TransitionTable::parse("Init -> Network:1\n"
                                                  "Network -> Memory:0.5,Cpu:0.5\n"
                                                  "Memory -> Cpu:1\n"
                                                  "Cpu -> Done:1\n"));
    // row does not sum to 1
    CHECK_THROWS_AS(loadgen::TransitionTable::parse("Init -> Network:0.5\nNetwork -> Done:1"),
                    std::invalid_argument);
    // reachable state with no row
    CHECK_THROWS_AS(loadgen::TransitionTable::parse("Init -> Network:1"), std::invalid_argument);
    // trap: Network can never reach Done
    CHECK_THROWS_AS(loadgen::TransitionTable::parse("Init -> Network:1\nNetwork -> Network:1"),
                    std::invalid_argument);
    // unknown state name, with line number
    try {
        loadgen::TransitionTable::parse("Init -> Network:1\nNetwork -> Nowhere:1");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    // missing row lookup
    auto sparse = loadgen::TransitionTable::from_rows({{LoadState::Init, {{LoadState::Network, 1.0}}}});
    loadgen::Rng rng(1);
    CHECK_THROWS_AS(sparse.next(LoadState::Network, rng), std::out_of_range);
}

TEST_CASE("probabilistic rows sample at their declared frequencies") {
    auto table = loadgen::TransitionTable::from_rows(
        {{LoadState::Memory, {{LoadState::Cpu, 0.5}, {LoadState::Network, 0.5}}}});
    loadgen::Rng rng(7);
    int cpu = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i)
        if (table.next(LoadState::Memory, rng) == LoadState::Cpu) ++cpu;
    double freq = static_cast<double>(cpu) / n;
    CHECK(std::abs(freq - 0.5) < 0.01);
}

TEST_CASE("load_cpu: empty duration returns immediately") {
    loadgen::Rng rng(1);
    auto r = loadgen::load_cpu(0.0, 1.0, 100, rng);
    CHECK(r.wall_s == 0.0);
    CHECK(r.busy_slots == 0);
    CHECK(r.total_slots == 0);
}

TEST_CASE("load_cpu: full duty spins every slot for the whole duration") {
    loadgen::Rng rng(1);
    auto r = loadgen::load_cpu(1.0, 1.0, 100, rng);
    CHECK(r.total_slots == 10);
    CHECK(r.busy_slots == 10);
    CHECK(r.wall_s >= 1.0);
    CHECK(r.wall_s < 1.3);
}

TEST_CASE("duty decisions follow the binomial expectation and the seed") {
    loadgen::Rng rng(123);
    auto decisions = loadgen::decide_slots(20'000, 0.5, rng);
    double busy = static_cast<double>(std::count(decisions.begin(), decisions.end(), true));
    CHECK(std::abs(busy / 20'000 - 0.5) < 0.01);

    loadgen::Rng a(9), b(9);
    CHECK(loadgen::decide_slots(500, 0.3, a) == loadgen::decide_slots(500, 0.3, b));

    loadgen::Rng c(1);
    auto all = loadgen::decide_slots(100, 1.0, c);
    CHECK(std::count(all.begin(), all.end(), true) == 100);
}

TEST_CASE("load_cpu at duty 0.5 over repeated short runs") {
    loadgen::Rng rng(2025);
    int64_t busy = 0, total = 0;
    for (int run = 0; run < 5; ++run) {
        auto r = loadgen::load_cpu(1.0, 0.5, 100, rng);
        busy += r.busy_slots;
        total += r.total_slots;
    }
    double fraction = static_cast<double>(busy) / static_cast<double>(total);
    CHECK(std::abs(fraction - 0.5) <= 0.1);
}

TEST_CASE("load_memory: zero bytes holds nothing") {
    auto block = loadgen::MemoryBlock::allocate(0);
    CHECK(block.bytes_held() == 0);
}

TEST_CASE("load_memory: resident size actually grows") {
    const uint64_t want = 64ULL << 20;
    uint64_t before = own_resident_bytes();
    auto block = loadgen::MemoryBlock::allocate(want);
    uint64_t after = own_resident_bytes();
    CHECK(block.bytes_held() == want);
    CHECK(after >= before + want - (64ULL << 10));  // page-granularity slack
    block.release();
    CHECK(block.bytes_held() == 0);
}

TEST_CASE("load_memory: an impossible request is a resource error, process continues") {
    const uint64_t absurd = 1ULL << 62;
    try {
        auto block = loadgen::MemoryBlock::allocate(absurd);
        FAIL("expected a resource error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(std::to_string(absurd)) != std::string::npos);
    }
    CHECK(loadgen::MemoryBlock::allocate(1024).bytes_held() == 1024);
}

TEST_CASE("load_network: zero duration sends nothing without touching the sink") {
    loadgen::Rng rng(1);
    auto r = loadgen::load_network(0.0, 1.0, 100, "127.0.0.1:1", rng);
    CHECK(r.bytes_sent == 0);
}

TEST_CASE("load_network: byte conservation on loopback") {
    loadgen::ByteSink sink("127.0.0.1:0");
    sink.start();
    std::string addr = "127.0.0.1:" + std::to_string(sink.port());

    loadgen::Rng rng(3);
    auto r = loadgen::load_network(1.0, 1.0, 100, addr, rng);
    CHECK(r.bytes_sent > 0);
    CHECK(r.wall_s >= 1.0);
    CHECK(r.wall_s < 1.5);

    // Drain: the sink counts asynchronously.
    uint64_t last = 0;
    for (int i = 0; i < 100; ++i) {
        uint64_t now = sink.total_bytes();
        if (now == last && now >= r.bytes_sent) break;
        last = now;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    sink.stop();
    CHECK(sink.total_bytes() == r.bytes_sent);
}

TEST_CASE("load_network: two concurrent senders sum at the sink") {
    loadgen::ByteSink sink("127.0.0.1:0");
    sink.start();
    std::string addr = "127.0.0.1:" + std::to_string(sink.port());

    uint64_t sent_a = 0, sent_b = 0;
    std::thread ta([&] {
        loadgen::Rng rng(10);
        sent_a = loadgen::load_network(0.8, 1.0, 100, addr, rng).bytes_sent;
    });
    std::thread tb([&] {
        loadgen::Rng rng(11);
        sent_b = loadgen::load_network(0.8, 1.0, 100, addr, rng).bytes_sent;
    });
    ta.join();
    tb.join();

    uint64_t want = sent_a + sent_b;
    for (int i = 0; i < 200 && sink.total_bytes() < want; ++i)
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    sink.stop();
    CHECK(sink.total_bytes() == want);
    CHECK(sink.connections() == 2);
}

TEST_CASE("load_network: unreachable sink is a transport error") {
    loadgen::Rng rng(1);
    CHECK_THROWS_AS(loadgen::load_network(1.0, 1.0, 100, "127.0.0.1:1", rng, 0.5), std::runtime_error);
}

TEST_CASE("sink with no traffic reports zero") {
    loadgen::ByteSink sink("127.0.0.1:0");
    sink.start();
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    sink.stop();
    CHECK(sink.total_bytes() == 0);
}

TEST_CASE("run_job: deterministic staging order with real loaders") {
    loadgen::ByteSink sink("127.0.0.1:0");
    sink.start();

    loadgen::LoadParams params;
    params.net_seconds = 0.3;
    params.cpu_seconds = 0.3;
    params.mem_bytes = 4ULL << 20;
    params.sink_addr = "127.0.0.1:" + std::to_string(sink.port());
    params.rng_seed = 5;

    auto report = loadgen::run_job(params, loadgen::TransitionTable::deterministic_default());
    sink.stop();

    REQUIRE(report.ok());
    CHECK(report.visit_sequence == std::vector<LoadState>{LoadState::Init, LoadState::Network,
                                                          LoadState::Memory, LoadState::Cpu, LoadState::Done});
    CHECK(report.bytes_allocated == params.mem_bytes);
    CHECK(report.bytes_sent > 0);
    CHECK(report.expected_total_s == doctest::Approx(0.6));
    CHECK(report.observed_total_s >= report.expected_total_s);
}

TEST_CASE("run_job: the empty job finishes almost immediately") {
    loadgen::LoadParams params;  // all zero
    auto report = loadgen::run_job(params, loadgen::TransitionTable::deterministic_default());
    REQUIRE(report.ok());
    CHECK(report.observed_total_s < 0.5);
    CHECK(report.expected_total_s == 0.0);
}

TEST_CASE("run_job: identical seed reproduces the visit sequence") {
    auto table = loadgen::TransitionTable::parse(
        "Init -> Network:1\n"
        "Network -> Memory:0.6,Cpu:0.3,Done:0.1\n"
        "Memory -> Cpu:0.7,Network:0.3\n"
        "Cpu -> Network:0.4,Done:0.6\n");
    loadgen::LoadParams params;
    params.rng_seed = 77;  // zero durations: transitions only
    auto a = loadgen::run_job(params, table);
    auto b = loadgen::run_job(params, table);
    REQUIRE(a.ok());
    CHECK(a.visit_sequence == b.visit_sequence);
    CHECK(a.visit_sequence.size() > 2);
}

TEST_CASE("run_job: loader failure leaves a partial report") {
    loadgen::LoadParams params;
    params.net_seconds = 1.0;
    params.sink_addr = "127.0.0.1:1";  // nothing listens
    params.connect_timeout_s = 0.3;
    auto report = loadgen::run_job(params, loadgen::TransitionTable::deterministic_default());
    CHECK(!report.ok());
    CHECK(report.visit_sequence.back() == LoadState::Network);
    CHECK(report.bytes_sent == 0);
}

TEST_CASE("report CSV append") {
    std::string path = "/tmp/loadgen_report_test.csv";
    ::unlink(path.c_str());
    loadgen::LoadReport report;
    report.expected_total_s = 1.0;
    report.observed_total_s = 1.1;
    report.visit_sequence = {LoadState::Init, LoadState::Done};
    loadgen::append_report_csv(path, "job-1", report);
    loadgen::append_report_csv(path, "job-2", report);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "job_id,expected_s,observed_s,bytes_sent,bytes_allocated,visit_sequence");
    std::getline(in, line);
    CHECK(line == "job-1,1.000,1.100,0,0,Init;Done");
    std::getline(in, line);
    CHECK(line.rfind("job-2,", 0) == 0);
    ::unlink(path.c_str());
}
