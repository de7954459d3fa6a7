#include "procmon/cpu_accounting.hpp"

#include <algorithm>
#include <stdexcept>

namespace procmon {

CpuUsage compute_cpu_percent(const Scan& prev, const Scan& curr,
                             const std::map<std::string, std::set<int64_t>>& groups, int ticks_per_s,
                             int cpu_count) {
    if (curr.t <= prev.t) throw std::invalid_argument("snapshots out of order (dt <= 0)");
    if (ticks_per_s <= 0) throw std::invalid_argument("ticks_per_s must be positive");

    CpuUsage usage;
    usage.dt_s = static_cast<double>(curr.t - prev.t);
    const double tick_budget = static_cast<double>(ticks_per_s) * usage.dt_s;
    const double cap = 100.0 * cpu_count;
    auto clamp = [cap](double v) { return std::clamp(v, 0.0, cap); };

    std::map<int64_t, uint64_t> prev_ticks;
    for (const auto& p : prev.processes) prev_ticks.emplace(p.pid, p.cpu_ticks);

    std::map<int64_t, double> pid_percent;
    std::map<int64_t, uint64_t> pid_resident;
    for (const auto& p : curr.processes) {
        uint64_t delta = p.cpu_ticks;
        auto it = prev_ticks.find(p.pid);
        if (it != prev_ticks.end() && p.cpu_ticks >= it->second) delta = p.cpu_ticks - it->second;
        // else: new pid, or tick regression (pid reuse) -> full curr ticks
        pid_percent[p.pid] = static_cast<double>(delta) / tick_budget * 100.0;
        pid_resident[p.pid] = p.resident_bytes;
    }

    for (const auto& [group, pids] : groups) {
        double percent = 0.0;
        uint64_t resident = 0;
        for (int64_t pid : pids) {
            if (auto it = pid_percent.find(pid); it != pid_percent.end()) percent += it->second;
            if (auto it = pid_resident.find(pid); it != pid_resident.end()) resident += it->second;
        }
        usage.group_percent[group] = clamp(percent);
        usage.group_resident_bytes[group] = resident;
    }

    uint64_t busy_delta =
        curr.totals.busy_ticks >= prev.totals.busy_ticks ? curr.totals.busy_ticks - prev.totals.busy_ticks : 0;
    uint64_t idle_delta =
        curr.totals.idle_ticks >= prev.totals.idle_ticks ? curr.totals.idle_ticks - prev.totals.idle_ticks : 0;
    usage.total_busy_percent = clamp(static_cast<double>(busy_delta) / tick_budget * 100.0);
    usage.idle_percent = clamp(static_cast<double>(idle_delta) / tick_budget * 100.0);
    return usage;
}

}  // namespace procmon
