#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "procmon/snapshot.hpp"

namespace procmon {

// Raised when a snapshot cannot be taken; the sampler records a gap and
// carries on.
class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProcessTableProvider {
public:
    virtual ~ProcessTableProvider() = default;

    virtual Scan snapshot() = 0;
    virtual int ticks_per_s() const = 0;
    virtual int cpu_count() const = 0;

    // A scripted timeline runs out; live kernels never do.
    virtual bool exhausted() const { return false; }
};

// One consistent snapshot with unique pids; duplicates from a racy provider
// are dropped (first wins). Propagates ProviderError.
Scan scan_process_table(ProcessTableProvider& provider);

// Reads /proc: per-process cumulative utime+stime jiffies, resident set,
// uid, full command line; system-wide busy/idle jiffies from /proc/stat.
class OsProcProvider : public ProcessTableProvider {
public:
    OsProcProvider();

    Scan snapshot() override;
    int ticks_per_s() const override { return ticks_per_s_; }
    int cpu_count() const override { return cpu_count_; }

private:
    int ticks_per_s_ = 100;
    int cpu_count_ = 1;
    long page_size_ = 4096;
};

// Replays a declared timeline exactly. File format, one row per entry:
//   t,pid,ppid,uid,command,cpu_ticks,resident_bytes
//   t,TOTAL,busy_ticks,idle_ticks
// '#' starts a comment; directives `# ticks_per_s=N` and `# ncpus=N` set
// the platform constants (defaults 100 and 1). Every declared t needs a
// TOTAL row. Commands must not contain commas.
class ScriptedProvider : public ProcessTableProvider {
public:
    static ScriptedProvider from_text(const std::string& text, bool loop = false);
    static ScriptedProvider from_file(const std::string& path, bool loop = false);

    Scan snapshot() override;
    int ticks_per_s() const override { return ticks_per_s_; }
    int cpu_count() const override { return cpu_count_; }
    bool exhausted() const override { return !loop_ && index_ >= frames_.size(); }

    size_t frame_count() const { return frames_.size(); }

private:
    std::vector<Scan> frames_;
    size_t index_ = 0;
    bool loop_ = false;
    int64_t loop_offset_ = 0;  // time shift applied on each wrap
    int ticks_per_s_ = 100;
    int cpu_count_ = 1;
};

}  // namespace procmon
