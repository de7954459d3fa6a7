#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace harness {

struct JobRecord {
    std::string job_id;
    std::string mode;  // "local" or "wrapped"
    int64_t submit_t = 0;
    int64_t start_t = 0;
    int64_t end_t = 0;
    int64_t expected_s = 0;
    int64_t observed_s = 0;  // end_t - start_t
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

// (observed - expected) / expected * 100. Throws std::invalid_argument
// when expected <= 0.
double percent_difference(double expected_s, double observed_s);

// CSV columns: job_id,mode,submit_t,start_t,end_t,expected_s,observed_s,status
void write_records_csv(const std::string& path, const std::vector<JobRecord>& records);
std::vector<JobRecord> read_records_csv(const std::string& path);

}  // namespace harness
