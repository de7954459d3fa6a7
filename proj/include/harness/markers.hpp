#pragma once

#include <vector>

#include "harness/records.hpp"
#include "wire/transport.hpp"

namespace harness {

// Sends each record's start and end as job.start / job.end metrics (value =
// job ordinal, packet t = the event time) so the analysis stage can align
// series and markers from one stream. Transport errors are swallowed; the
// records CSV is always the durable copy.
// Returns the number of marker metrics actually sent.
size_t emit_job_markers(const std::vector<JobRecord>& records, wire::UdpSender& sender,
                        const std::string& host);

}  // namespace harness
