#pragma once

#include <map>
#include <string>
#include <vector>

#include "harness/records.hpp"

namespace analysis {

struct ModeStats {
    double min_pd = 0.0;
    double max_pd = 0.0;
    double mean_pd = 0.0;
    double median_pd = 0.0;
    size_t count = 0;
};

struct OverheadRow {
    std::string job_id;
    std::string mode;
    int64_t expected_s = 0;
    int64_t observed_s = 0;
    double percent_diff = 0.0;
};

struct OverheadReport {
    std::map<std::string, ModeStats> per_mode;
    std::vector<OverheadRow> rows;  // successful records, input order
};

// Percent-difference statistics grouped by submission mode. Failed records
// are excluded; throws std::invalid_argument when no successful record
// remains.
OverheadReport overhead_report(const std::vector<harness::JobRecord>& records);

}  // namespace analysis
