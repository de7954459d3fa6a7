#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loadgen {

// Full parameterisation of one emulated job. Defaults describe an empty job.
struct LoadParams {
    double net_seconds = 0.0;
    uint64_t mem_bytes = 0;
    double cpu_seconds = 0.0;
    double duty_p = 1.0;  // probability a duty-cycle slot actively loads
    double pareto_alpha = 3.0;
    double pareto_xmin = 1.0;
    std::string sink_addr = "127.0.0.1:9009";
    uint64_t rng_seed = 0;
    int slot_ms = 100;
    double connect_timeout_s = 5.0;
};

// Throws std::invalid_argument naming the violated constraint.
void validate(const LoadParams& params);

// Line-based `key=value` text with `#` comments; overrides are further
// `key=value` entries applied after the file and take precedence.
// Errors: unknown key (named), unparsable value (line number), constraint
// violation. All thrown as std::invalid_argument.
LoadParams parse_config(const std::string& file_text, const std::vector<std::string>& overrides);

}  // namespace loadgen
