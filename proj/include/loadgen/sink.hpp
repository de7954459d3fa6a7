#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "common/net.hpp"

namespace loadgen {

// Receive-and-discard endpoint for network loading. Accepts any number of
// concurrent stream connections, counts the bytes and throws them away.
class ByteSink {
public:
    // Binds and listens immediately; throws std::runtime_error on failure.
    // Port 0 picks an ephemeral port (see port()).
    explicit ByteSink(const std::string& listen_addr);
    ~ByteSink();

    ByteSink(const ByteSink&) = delete;
    ByteSink& operator=(const ByteSink&) = delete;

    void start();
    void stop();

    uint16_t port() const { return port_; }
    uint64_t total_bytes() const { return total_bytes_; }
    uint64_t connections() const { return connections_; }

private:
    void accept_loop();

    common::Fd listen_fd_;
    uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::atomic<uint64_t> total_bytes_{0};
    std::atomic<uint64_t> connections_{0};
    std::thread accept_thread_;
    std::vector<std::thread> workers_;
};

}  // namespace loadgen
