#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "procmon/snapshot.hpp"

namespace procmon {

struct CpuUsage {
    std::map<std::string, double> group_percent;          // % of one CPU per group
    std::map<std::string, uint64_t> group_resident_bytes; // resident set at curr, per group
    double total_busy_percent = 0.0;
    double idle_percent = 0.0;
    double dt_s = 0.0;
};

// Jiffy-delta attribution between two snapshots. Per pid:
//   percent = delta_ticks / (ticks_per_s * dt) * 100
// summed per group. Pids present only in curr contribute their full curr
// ticks (their whole life fits in the interval); pids that exited between
// the snapshots contribute nothing; a tick regression for a live pid is
// treated as pid reuse and contributes curr ticks only. Percentages are
// clamped to [0, 100 * cpu_count].
// Throws std::invalid_argument when curr is not after prev.
CpuUsage compute_cpu_percent(const Scan& prev, const Scan& curr,
                             const std::map<std::string, std::set<int64_t>>& groups, int ticks_per_s,
                             int cpu_count);

}  // namespace procmon
