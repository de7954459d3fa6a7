#include "loadgen/job.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "loadgen/loaders.hpp"

namespace loadgen {

namespace {
// A valid table absorbs at Done with probability 1, so this bound is never
// hit in practice; it turns a bad hand-built table into an error instead of
// a hang.
constexpr int64_t kMaxTransitions = 1'000'000;
}  // namespace

LoadReport run_job(const LoadParams& params, const TransitionTable& table) {
    validate(params);

    LoadReport report;
    Rng rng(params.rng_seed);
    LoadState state = LoadState::Init;
    report.visit_sequence.push_back(state);

    std::optional<MemoryBlock> memory;
    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        int64_t transitions = 0;
        while (state != LoadState::Done) {
            if (++transitions > kMaxTransitions)
                throw std::runtime_error("transition limit exceeded; table does not absorb");
            state = table.next(state, rng);
            report.visit_sequence.push_back(state);

            double before = elapsed();
            switch (state) {
                case LoadState::Network: {
                    report.expected_total_s += params.net_seconds;
                    if (params.net_seconds > 0.0) {
                        auto r = load_network(params.net_seconds, params.duty_p, params.slot_ms,
                                              params.sink_addr, rng, params.connect_timeout_s);
                        report.bytes_sent += r.bytes_sent;
                    }
                    break;
                }
                case LoadState::Memory: {
                    if (!memory && params.mem_bytes > 0) memory = MemoryBlock::allocate(params.mem_bytes);
                    report.bytes_allocated = memory ? memory->bytes_held() : 0;
                    break;
                }
                case LoadState::Cpu: {
                    report.expected_total_s += params.cpu_seconds;
                    if (params.cpu_seconds > 0.0)
                        load_cpu(params.cpu_seconds, params.duty_p, params.slot_ms, rng);
                    break;
                }
                case LoadState::Init:
                case LoadState::Done:
                    break;
            }
            report.state_wall_s[state] += elapsed() - before;
        }
    } catch (const std::exception& e) {
        report.error = e.what();
    }

    report.observed_total_s = elapsed();
    return report;
}

std::string visit_sequence_string(const std::vector<LoadState>& seq) {
    std::string out;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (i) out.push_back(';');
        out += to_string(seq[i]);
    }
    return out;
}

void append_report_csv(const std::string& path, const std::string& job_id, const LoadReport& report) {
    bool need_header = true;
    {
        std::ifstream probe(path);
        need_header = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open report file " + path);
    if (need_header) out << "job_id,expected_s,observed_s,bytes_sent,bytes_allocated,visit_sequence\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%.3f,%.3f,%llu,%llu,", job_id.c_str(), report.expected_total_s,
                  report.observed_total_s, static_cast<unsigned long long>(report.bytes_sent),
                  static_cast<unsigned long long>(report.bytes_allocated));
    out << line << visit_sequence_string(report.visit_sequence) << "\n";
}

}  // namespace loadgen
