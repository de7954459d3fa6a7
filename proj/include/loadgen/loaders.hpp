#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "loadgen/rng.hpp"

namespace loadgen {

// Per-slot busy/idle decisions, drawn up front so a run's duty pattern is a
// pure function of the seed.
std::vector<bool> decide_slots(int64_t slot_count, double duty_p, Rng& rng);

struct CpuLoadReport {
    double wall_s = 0.0;
    int64_t busy_slots = 0;
    int64_t total_slots = 0;
};

// Spins or sleeps through `duration_s` in slots of slot_ms; each slot is
// busy with probability duty_p. duration 0 returns immediately.
CpuLoadReport load_cpu(double duration_s, double duty_p, int slot_ms, Rng& rng);

// Page-touched allocation held until destruction.
class MemoryBlock {
public:
    MemoryBlock() = default;

    // Throws std::runtime_error naming the requested byte count on failure.
    static MemoryBlock allocate(uint64_t bytes);

    uint64_t bytes_held() const { return bytes_; }
    void release();

private:
    std::unique_ptr<char[]> data_;
    uint64_t bytes_ = 0;
};

struct NetLoadReport {
    uint64_t bytes_sent = 0;
    double wall_s = 0.0;
};

// Streams 8 KiB payloads to the sink for `duration_s` wall seconds; each
// slot actively sends with probability duty_p. Throws std::runtime_error
// when the sink is unreachable (after connect_timeout_s) or drops the
// connection mid-run.
NetLoadReport load_network(double duration_s, double duty_p, int slot_ms, const std::string& sink_addr,
                           Rng& rng, double connect_timeout_s = 5.0);

}  // namespace loadgen
