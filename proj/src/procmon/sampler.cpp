#include "procmon/sampler.hpp"

#include <sys/resource.h>

#include <chrono>
#include <optional>
#include <thread>

#include "common/net.hpp"
#include "procmon/cpu_accounting.hpp"

namespace procmon {

void validate(const SamplerConfig& config) {
    if (config.period_s < 1) throw std::invalid_argument("period_s must be >= 1");
    if (config.window_s < config.period_s || config.window_s % config.period_s != 0)
        throw std::invalid_argument("window_s must be a positive integer multiple of period_s");
}

namespace {

struct WindowAccumulator {
    std::map<std::string, double> percent_sum;
    std::map<std::string, int> percent_count;
    std::map<std::string, double> resident_sum;
    double total_sum = 0.0;
    double idle_sum = 0.0;
    int samples = 0;
    int gaps = 0;

    void add(const CpuUsage& usage) {
        for (const auto& [group, pct] : usage.group_percent) {
            percent_sum[group] += pct;
            percent_count[group] += 1;
        }
        for (const auto& [group, bytes] : usage.group_resident_bytes)
            resident_sum[group] += static_cast<double>(bytes);
        total_sum += usage.total_busy_percent;
        idle_sum += usage.idle_percent;
        ++samples;
    }

    void reset() { *this = WindowAccumulator{}; }
};

// Persistent pid -> group assignment. A descendant keeps its group for the
// rest of its life even after the marked ancestor exits; a pid that
// disappears is forgotten, and a tick regression (pid reuse) re-resolves.
class GroupTracker {
public:
    explicit GroupTracker(const GroupingConfig& config) : config_(config) {}

    std::map<std::string, std::set<int64_t>> assign(const Scan& scan) {
        std::map<int64_t, uint64_t> ticks;
        for (const auto& p : scan.processes) ticks.emplace(p.pid, p.cpu_ticks);
        for (auto it = last_ticks_.begin(); it != last_ticks_.end(); ++it) {
            auto now = ticks.find(it->first);
            if (now != ticks.end() && now->second < it->second) assigned_.erase(it->first);  // pid reuse
        }

        auto fresh = build_process_groups(scan.processes, config_);
        for (const auto& [group, pids] : fresh) {
            for (int64_t pid : pids) assigned_.emplace(pid, group);  // first assignment wins
        }

        std::map<std::string, std::set<int64_t>> groups;
        for (auto it = assigned_.begin(); it != assigned_.end();) {
            if (ticks.count(it->first)) {
                groups[it->second].insert(it->first);
                ++it;
            } else {
                it = assigned_.erase(it);  // exited
            }
        }
        last_ticks_ = std::move(ticks);
        return groups;
    }

private:
    GroupingConfig config_;
    std::map<int64_t, std::string> assigned_;
    std::map<int64_t, uint64_t> last_ticks_;
};

}  // namespace

void run_sampler(const SamplerConfig& config, ProcessTableProvider& provider, const SamplerHooks& hooks,
                 const std::atomic<bool>* stop, bool realtime) {
    validate(config);
    const std::string host = config.host.empty() ? common::local_hostname() : config.host;
    const int periods_per_window = config.window_s / config.period_s;
    const int ticks_per_s = provider.ticks_per_s();
    const int cpu_count = provider.cpu_count();

    GroupTracker tracker(config.grouping);
    WindowAccumulator window;

    auto emit_window = [&](int64_t window_end_t) {
        if (window.samples == 0) {
            window.reset();
            return;
        }
        auto make_sample = [&](const std::string& id) {
            GroupSample s;
            s.group_id = id;
            s.host = host;
            s.t = window_end_t;
            s.interval_s = config.window_s;
            s.gaps = window.gaps;
            s.ticks_per_s = ticks_per_s;
            return s;
        };
        if (config.measure_cpu) {
            for (const auto& [group, sum] : window.percent_sum) {
                GroupSample s = make_sample(group);
                s.cpu_percent = sum / window.percent_count[group];
                if (config.measure_mem)
                    s.mem_bytes = static_cast<uint64_t>(window.resident_sum[group] / window.percent_count[group]);
                hooks.emit(s);
            }
            GroupSample total = make_sample(kTotalSeries);
            total.cpu_percent = window.total_sum / window.samples;
            hooks.emit(total);
            GroupSample idle = make_sample(kIdleSeries);
            idle.cpu_percent = window.idle_sum / window.samples;
            hooks.emit(idle);
        }
        if (hooks.window_end) hooks.window_end(window_end_t);
        window.reset();
    };

    std::optional<Scan> prev;
    int periods_done = 0;
    auto next_tick = std::chrono::steady_clock::now();

    while (true) {
        if (stop && stop->load()) break;
        if (provider.exhausted()) break;
        if (realtime) {
            next_tick += std::chrono::seconds(config.period_s);
            std::this_thread::sleep_until(next_tick);
            if (stop && stop->load()) break;
        }

        std::optional<Scan> curr;
        try {
            curr = scan_process_table(provider);
        } catch (const ProviderError&) {
            curr.reset();
        }

        if (!prev) {  // need a baseline before the first delta
            if (curr) prev = std::move(curr);
            continue;
        }

        if (curr) {
            auto groups = tracker.assign(*curr);
            try {
                window.add(compute_cpu_percent(*prev, *curr, groups, ticks_per_s, cpu_count));
            } catch (const std::invalid_argument&) {
                ++window.gaps;  // stalled or repeated timestamp
            }
            prev = std::move(curr);
        } else {
            ++window.gaps;
        }

        if (++periods_done % periods_per_window == 0) emit_window(prev->t);
    }
}

double measure_self_footprint(ProcessTableProvider& provider, double window_s, int period_ms) {
    auto cpu_seconds = [] {
        rusage ru{};
        getrusage(RUSAGE_SELF, &ru);
        return static_cast<double>(ru.ru_utime.tv_sec + ru.ru_stime.tv_sec) +
               static_cast<double>(ru.ru_utime.tv_usec + ru.ru_stime.tv_usec) / 1e6;
    };

    GroupTracker tracker(GroupingConfig{GroupingPolicy::AllManagedJobs, "monitored-job"});
    auto start_cpu = cpu_seconds();
    auto start = std::chrono::steady_clock::now();
    auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                std::chrono::duration<double>(window_s));

    std::optional<Scan> prev;
    while (std::chrono::steady_clock::now() < deadline) {
        try {
            Scan curr = scan_process_table(provider);
            auto groups = tracker.assign(curr);
            if (prev && curr.t > prev->t)
                compute_cpu_percent(*prev, curr, groups, provider.ticks_per_s(), provider.cpu_count());
            prev = std::move(curr);
        } catch (const ProviderError&) {
            if (provider.exhausted()) break;
        }
        if (period_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(period_ms));
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (wall <= 0.0) return 0.0;
    return (cpu_seconds() - start_cpu) / wall * 100.0;
}

}  // namespace procmon
