#pragma once

#include <netinet/in.h>

#include <cstdint>
#include <string>

namespace common {

struct HostPort {
    std::string host;
    uint16_t port = 0;
};

// Parses "host:port". Throws std::invalid_argument on malformed input.
HostPort parse_host_port(const std::string& text);

// IPv4 resolution (numeric or named). Throws std::runtime_error on failure.
sockaddr_in resolve_ipv4(const std::string& host, uint16_t port);

bool is_multicast_ipv4(const sockaddr_in& addr);

std::string local_hostname();

// Owning file descriptor.
class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    ~Fd() { reset(); }
    Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Fd& operator=(Fd&& other) noexcept {
        if (this != &other) {
            reset(other.fd_);
            other.fd_ = -1;
        }
        return *this;
    }
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;

    int get() const { return fd_; }
    bool valid() const { return fd_ >= 0; }
    void reset(int fd = -1);

private:
    int fd_ = -1;
};

}  // namespace common
