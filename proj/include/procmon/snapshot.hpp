#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace procmon {

struct ProcessSnapshot {
    int64_t pid = 0;
    int64_t ppid = 0;
    int64_t uid = 0;
    std::string command;
    uint64_t cpu_ticks = 0;       // cumulative scheduled jiffies (user + system)
    uint64_t resident_bytes = 0;
    int64_t snapshot_time = 0;    // seconds since epoch
};

struct SystemTotals {
    uint64_t busy_ticks = 0;  // cumulative across all CPUs
    uint64_t idle_ticks = 0;
};

struct Scan {
    int64_t t = 0;
    std::vector<ProcessSnapshot> processes;
    SystemTotals totals;
};

}  // namespace procmon
