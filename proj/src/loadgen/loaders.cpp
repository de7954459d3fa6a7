#include "loadgen/loaders.hpp"

#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <new>
#include <stdexcept>
#include <thread>

#include "common/net.hpp"

namespace loadgen {

using Clock = std::chrono::steady_clock;

std::vector<bool> decide_slots(int64_t slot_count, double duty_p, Rng& rng) {
    std::vector<bool> decisions(static_cast<size_t>(slot_count));
    for (auto&& d : decisions) d = uniform_co(rng) < duty_p;
    return decisions;
}

namespace {

int64_t slot_count_for(double duration_s, int slot_ms) {
    return static_cast<int64_t>(std::ceil(duration_s * 1000.0 / slot_ms));
}

void spin_until(Clock::time_point deadline) {
    volatile double sink = 1.0;
    while (Clock::now() < deadline) {
        for (int i = 0; i < 2000; ++i) sink = sink * 1.0000001 + 0.5;
    }
    (void)sink;
}

}  // namespace

CpuLoadReport load_cpu(double duration_s, double duty_p, int slot_ms, Rng& rng) {
    if (duration_s < 0.0) throw std::invalid_argument("duration must be >= 0");
    CpuLoadReport report;
    if (duration_s == 0.0) return report;

    report.total_slots = slot_count_for(duration_s, slot_ms);
    std::vector<bool> busy = decide_slots(report.total_slots, duty_p, rng);

    auto start = Clock::now();
    auto end = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(duration_s));
    for (int64_t i = 0; i < report.total_slots; ++i) {
        auto slot_end = std::min(end, start + std::chrono::milliseconds(slot_ms) * (i + 1));
        if (busy[static_cast<size_t>(i)]) {
            ++report.busy_slots;
            spin_until(slot_end);
        } else {
            std::this_thread::sleep_until(slot_end);
        }
    }
    report.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

MemoryBlock MemoryBlock::allocate(uint64_t bytes) {
    MemoryBlock block;
    if (bytes == 0) return block;
    try {
        block.data_ = std::make_unique<char[]>(bytes);
    } catch (const std::bad_alloc&) {
        throw std::runtime_error("cannot allocate " + std::to_string(bytes) + " bytes");
    }
    // Touch one word per page so the allocation is actually resident.
    constexpr uint64_t kPage = 4096;
    for (uint64_t off = 0; off < bytes; off += kPage) block.data_[off] = static_cast<char>(off);
    block.data_[bytes - 1] = 1;
    block.bytes_ = bytes;
    return block;
}

void MemoryBlock::release() {
    data_.reset();
    bytes_ = 0;
}

namespace {

common::Fd connect_with_timeout(const std::string& sink_addr, double timeout_s) {
    auto hp = common::parse_host_port(sink_addr);
    sockaddr_in dest = common::resolve_ipv4(hp.host, hp.port);

    common::Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (!fd.valid()) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));

    int flags = fcntl(fd.get(), F_GETFL, 0);
    fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);

    int rc = ::connect(fd.get(), reinterpret_cast<const sockaddr*>(&dest), sizeof(dest));
    if (rc != 0 && errno != EINPROGRESS)
        throw std::runtime_error("cannot connect to sink " + sink_addr + ": " + std::strerror(errno));
    if (rc != 0) {
        pollfd pfd{fd.get(), POLLOUT, 0};
        int ready = ::poll(&pfd, 1, static_cast<int>(timeout_s * 1000.0));
        if (ready <= 0) throw std::runtime_error("connect to sink " + sink_addr + " timed out");
        int err = 0;
        socklen_t len = sizeof(err);
        getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0)
            throw std::runtime_error("cannot connect to sink " + sink_addr + ": " + std::strerror(err));
    }
    fcntl(fd.get(), F_SETFL, flags);  // back to blocking for the send loop
    return fd;
}

}  // namespace

NetLoadReport load_network(double duration_s, double duty_p, int slot_ms, const std::string& sink_addr,
                           Rng& rng, double connect_timeout_s) {
    if (duration_s < 0.0) throw std::invalid_argument("duration must be >= 0");
    NetLoadReport report;
    if (duration_s == 0.0) return report;

    common::Fd fd = connect_with_timeout(sink_addr, connect_timeout_s);

    int64_t total_slots = slot_count_for(duration_s, slot_ms);
    std::vector<bool> active = decide_slots(total_slots, duty_p, rng);
    std::vector<char> payload(8 * 1024, 'x');

    auto start = Clock::now();
    auto end = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(duration_s));
    for (int64_t i = 0; i < total_slots; ++i) {
        auto slot_end = std::min(end, start + std::chrono::milliseconds(slot_ms) * (i + 1));
        if (!active[static_cast<size_t>(i)]) {
            std::this_thread::sleep_until(slot_end);
            continue;
        }
        while (Clock::now() < slot_end) {
            ssize_t n = ::send(fd.get(), payload.data(), payload.size(), MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw std::runtime_error("sink connection lost after " + std::to_string(report.bytes_sent) +
                                         " bytes: " + std::strerror(errno));
            }
            report.bytes_sent += static_cast<uint64_t>(n);
        }
    }
    report.wall_s = std::chrono::duration<double>(Clock::now() - start).count();
    return report;
}

}  // namespace loadgen
