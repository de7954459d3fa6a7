#pragma once

#include <functional>
#include <string>
#include <vector>

#include "harness/jobset.hpp"
#include "harness/records.hpp"

namespace harness {

enum class SubmissionMode { Local, Wrapped };

SubmissionMode mode_from_string(const std::string& s);
const char* to_string(SubmissionMode mode);

struct RunnerConfig {
    SubmissionMode mode = SubmissionMode::Local;
    double wrap_overhead_s = 0.0;  // startup delay injected by the wrapper
    std::string wrap_prefix;       // custom prefix command; default builds "sleep <overhead>;"
    std::string loadgen_path;
    std::string sink_addr;  // overrides each job's sink when set
    double settle_s = 45.0;
    std::string marker_tag = "gridjob";
    bool quiet = true;  // job stdout -> /dev/null
};

// Strictly sequential master-slave submission: run job i to completion,
// wait settle_s, run job i+1. Start/end times are recorded at one-second
// resolution; each spawn is aligned to a whole-second boundary so
// observed_s never undercounts an integral expected_s. A failing job is
// flagged in its record and the run continues.
std::vector<JobRecord> run_master_slave(const JobSet& set, const RunnerConfig& config,
                                        const std::function<void(const JobRecord&)>& on_record = {});

}  // namespace harness
