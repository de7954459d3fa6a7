#include "harness/runner.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <time.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <thread>

extern char** environ;

namespace harness {

SubmissionMode mode_from_string(const std::string& s) {
    if (s == "local") return SubmissionMode::Local;
    if (s == "wrapped") return SubmissionMode::Wrapped;
    throw std::invalid_argument("unknown submission mode '" + s + "' (want local|wrapped)");
}

const char* to_string(SubmissionMode mode) {
    return mode == SubmissionMode::Local ? "local" : "wrapped";
}

namespace {

std::vector<std::string> loadgen_argv(const JobSpec& job, const RunnerConfig& config) {
    auto set = [](const char* key, const std::string& value) { return std::string(key) + "=" + value; };
    char num[64];
    std::vector<std::string> argv{config.loadgen_path};
    auto add_set = [&](const std::string& kv) {
        argv.emplace_back("--set");
        argv.push_back(kv);
    };
    std::snprintf(num, sizeof(num), "%.0f", job.params.net_seconds);
    add_set(set("net_seconds", num));
    std::snprintf(num, sizeof(num), "%.0f", job.params.cpu_seconds);
    add_set(set("cpu_seconds", num));
    add_set(set("mem_bytes", std::to_string(job.params.mem_bytes)));
    std::snprintf(num, sizeof(num), "%g", job.params.duty_p);
    add_set(set("duty_p", num));
    const std::string& sink = config.sink_addr.empty() ? job.params.sink_addr : config.sink_addr;
    add_set(set("sink_addr", sink));
    argv.emplace_back("--seed");
    argv.push_back(std::to_string(job.params.rng_seed));
    argv.emplace_back("--tag");
    argv.push_back(config.marker_tag + ":" + job.job_id);
    return argv;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out.push_back(c);
    }
    out += "'";
    return out;
}

// Waits for the next whole-second boundary and returns it.
int64_t align_to_second() {
    timespec now{};
    clock_gettime(CLOCK_REALTIME, &now);
    timespec rem{0, 1'000'000'000L - now.tv_nsec + 2'000'000L};
    if (rem.tv_nsec >= 1'000'000'000L) {
        rem.tv_sec += rem.tv_nsec / 1'000'000'000L;
        rem.tv_nsec %= 1'000'000'000L;
    }
    while (nanosleep(&rem, &rem) != 0 && errno == EINTR) {}
    return static_cast<int64_t>(::time(nullptr));
}

pid_t spawn(const std::vector<std::string>& argv, bool quiet) {
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    if (quiet) posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);

    pid_t pid = -1;
    int rc = posix_spawn(&pid, argv[0].c_str(), &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw std::runtime_error("cannot spawn " + argv[0] + ": " + std::strerror(rc));
    return pid;
}

}  // namespace

std::vector<JobRecord> run_master_slave(const JobSet& set, const RunnerConfig& config,
                                        const std::function<void(const JobRecord&)>& on_record) {
    if (config.loadgen_path.empty()) throw std::invalid_argument("loadgen path is not set");

    std::vector<JobRecord> records;
    for (size_t i = 0; i < set.jobs.size(); ++i) {
        const JobSpec& job = set.jobs[i];

        JobRecord record;
        record.job_id = job.job_id;
        record.mode = to_string(config.mode);
        record.expected_s = job.expected_s;

        std::vector<std::string> argv = loadgen_argv(job, config);
        if (config.mode == SubmissionMode::Wrapped) {
            std::string cmd;
            if (!config.wrap_prefix.empty()) {
                cmd = config.wrap_prefix + " ";
            } else {
                char delay[32];
                std::snprintf(delay, sizeof(delay), "%.3f", config.wrap_overhead_s);
                cmd = "sleep " + std::string(delay) + "; exec ";
            }
            for (const auto& a : argv) cmd += shell_quote(a) + " ";
            argv = {"/bin/sh", "-c", cmd};
        }

        record.submit_t = align_to_second();
        record.start_t = record.submit_t;
        try {
            pid_t pid = spawn(argv, config.quiet);
            int status = 0;
            while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
            record.end_t = static_cast<int64_t>(::time(nullptr));
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
                record.status = "failed(" + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ")";
        } catch (const std::exception& e) {
            record.end_t = static_cast<int64_t>(::time(nullptr));
            record.status = std::string("spawn-error: ") + e.what();
        }
        record.observed_s = record.end_t - record.start_t;
        records.push_back(record);
        if (on_record) on_record(record);

        if (i + 1 < set.jobs.size() && config.settle_s > 0.0)
            std::this_thread::sleep_for(std::chrono::duration<double>(config.settle_s));
    }
    return records;
}

}  // namespace harness
