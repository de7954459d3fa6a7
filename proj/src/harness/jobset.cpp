#include "harness/jobset.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "loadgen/pareto.hpp"
#include "loadgen/rng.hpp"

namespace harness {

JobSet generate_job_set(int count, double alpha, double xmin, uint64_t mem_lo, uint64_t mem_hi, double duty_p,
                        uint64_t seed) {
    if (count <= 0) throw std::invalid_argument("job count must be positive");
    if (!(alpha > 0.0) || !(xmin > 0.0)) throw std::invalid_argument("bad Pareto parameters");
    if (mem_hi < mem_lo) throw std::invalid_argument("memory range is inverted");
    if (!(duty_p >= 0.0 && duty_p <= 1.0)) throw std::invalid_argument("duty_p out of range [0,1]");

    JobSet set;
    set.seed = seed;
    set.alpha = alpha;
    set.xmin = xmin;
    set.mem_lo = mem_lo;
    set.mem_hi = mem_hi;
    set.duty_p = duty_p;

    loadgen::Rng rng(seed);
    auto whole_seconds = [](double x) { return std::max<int64_t>(1, std::llround(x)); };

    for (int i = 0; i < count; ++i) {
        JobSpec job;
        char id[32];
        std::snprintf(id, sizeof(id), "job-%03d", i);
        job.job_id = id;

        int64_t net = whole_seconds(loadgen::sample_pareto(rng, alpha, xmin));
        int64_t cpu = whole_seconds(loadgen::sample_pareto(rng, alpha, xmin));
        uint64_t span = mem_hi - mem_lo;
        uint64_t mem = mem_lo;
        if (span > 0) mem += rng() % (span + 1);

        job.params.net_seconds = static_cast<double>(net);
        job.params.cpu_seconds = static_cast<double>(cpu);
        job.params.mem_bytes = mem;
        job.params.duty_p = duty_p;
        job.params.pareto_alpha = alpha;
        job.params.pareto_xmin = xmin;
        job.params.rng_seed = loadgen::splitmix64(seed + static_cast<uint64_t>(i) + 1);
        job.expected_s = net + cpu;
        set.jobs.push_back(std::move(job));
    }
    return set;
}

}  // namespace harness
