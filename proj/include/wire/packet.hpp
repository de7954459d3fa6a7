#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wire {

struct Metric {
    std::string name;
    double value = 0.0;
    std::string units;
    std::optional<std::string> group;
    std::optional<int64_t> gaps;

    bool operator==(const Metric&) const = default;
};

struct MetricPacket {
    std::string host;
    int64_t t = 0;  // seconds since epoch
    std::vector<Metric> metrics;

    bool operator==(const MetricPacket&) const = default;
};

// Metric names are restricted to [A-Za-z0-9_.]+.
bool valid_metric_name(std::string_view name);

// Throws std::invalid_argument if the packet violates its invariants
// (empty host, no metrics, bad metric name).
void validate(const MetricPacket& packet);

}  // namespace wire
