#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "procmon/grouping.hpp"
#include "procmon/provider.hpp"

namespace procmon {

struct SamplerConfig {
    int period_s = 1;
    int window_s = 15;  // must be a positive integer multiple of period_s
    bool measure_cpu = true;
    bool measure_mem = true;
    GroupingConfig grouping;
    std::string host;  // defaults to the local hostname when empty
};

// Throws std::invalid_argument on a bad period/window combination.
void validate(const SamplerConfig& config);

// One averaged measurement for one group over one window. The pseudo-group
// ids kTotalSeries / kIdleSeries carry the host-wide busy and idle series.
struct GroupSample {
    std::string group_id;
    double cpu_percent = 0.0;
    uint64_t mem_bytes = 0;
    std::string host;
    int64_t t = 0;        // window end
    int interval_s = 0;   // averaging window length
    int gaps = 0;         // periods lost in this window (never interpolated)
    int ticks_per_s = 0;
};

inline constexpr const char* kTotalSeries = "_total";
inline constexpr const char* kIdleSeries = "_idle";

struct SamplerHooks {
    std::function<void(const GroupSample&)> emit;
    std::function<void(int64_t window_end_t)> window_end;  // optional
};

// Samples every period_s and emits one GroupSample per group per window
// (arithmetic mean of the window's per-period percentages), plus the host
// total and idle series. Provider failures and stalls are counted as gaps
// in the window that observes them. Tumbling windows; an incomplete window
// at shutdown is dropped. Runs until `stop` is set or a scripted provider
// is exhausted. When realtime is false no wall-clock pacing happens
// (scripted replay "in test mode").
void run_sampler(const SamplerConfig& config, ProcessTableProvider& provider, const SamplerHooks& hooks,
                 const std::atomic<bool>* stop = nullptr, bool realtime = true);

// Runs the sampling pipeline against `provider` for about window_s wall
// seconds, polling every period_ms, and returns this process's own CPU
// consumption as a percent of one CPU (getrusage delta over wall time).
double measure_self_footprint(ProcessTableProvider& provider, double window_s, int period_ms);

}  // namespace procmon
