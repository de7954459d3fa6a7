#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadgen/params.hpp"

namespace harness {

struct JobSpec {
    std::string job_id;
    loadgen::LoadParams params;
    int64_t expected_s = 0;  // net_seconds + cpu_seconds; memory allowance 0
};

struct JobSet {
    std::vector<JobSpec> jobs;
    uint64_t seed = 0;
    double alpha = 0.0;
    double xmin = 0.0;
    uint64_t mem_lo = 0;
    uint64_t mem_hi = 0;
    double duty_p = 1.0;
};

// Draws net and cpu loading times independently from Pareto(alpha, xmin),
// rounded to whole seconds (>= 1) so expected_s is integral; memory uniform
// in [mem_lo, mem_hi]. Identical inputs regenerate the identical JobSet.
// Throws std::invalid_argument on count <= 0 or bad parameters.
JobSet generate_job_set(int count, double alpha, double xmin, uint64_t mem_lo, uint64_t mem_hi, double duty_p,
                        uint64_t seed);

}  // namespace harness
