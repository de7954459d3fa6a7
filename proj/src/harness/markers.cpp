#include "harness/markers.hpp"

namespace harness {

size_t emit_job_markers(const std::vector<JobRecord>& records, wire::UdpSender& sender,
                        const std::string& host) {
    size_t sent = 0;
    auto emit = [&](int64_t t, const char* name, double ordinal) {
        wire::MetricPacket packet;
        packet.host = host;
        packet.t = t;
        packet.metrics.push_back(wire::Metric{name, ordinal, "job", std::nullopt, std::nullopt});
        try {
            sender.send(packet);
            ++sent;
        } catch (const std::exception&) {
            // fire-and-forget; the CSV copy is authoritative
        }
    };
    for (size_t i = 0; i < records.size(); ++i) {
        emit(records[i].start_t, "job.start", static_cast<double>(i));
        emit(records[i].end_t, "job.end", static_cast<double>(i));
    }
    return sent;
}

}  // namespace harness
