#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "loadgen/params.hpp"
#include "loadgen/state_machine.hpp"

namespace loadgen {

struct LoadReport {
    std::map<LoadState, double> state_wall_s;
    uint64_t bytes_sent = 0;
    uint64_t bytes_allocated = 0;
    double expected_total_s = 0.0;  // sum of commanded durations over the visit sequence
    double observed_total_s = 0.0;
    std::vector<LoadState> visit_sequence;
    std::string error;  // non-empty when the run ended early

    bool ok() const { return error.empty(); }
};

// Drives the state machine from Init to Done, running each state's loader
// with its commanded duration/size. Memory is held from the first Memory
// entry until the job ends. Loader failures end the run and leave a
// partial report with `error` set.
LoadReport run_job(const LoadParams& params, const TransitionTable& table);

std::string visit_sequence_string(const std::vector<LoadState>& seq);

// Appends one CSV row (header is written when the file is empty):
// job_id,expected_s,observed_s,bytes_sent,bytes_allocated,visit_sequence
void append_report_csv(const std::string& path, const std::string& job_id, const LoadReport& report);

}  // namespace loadgen
