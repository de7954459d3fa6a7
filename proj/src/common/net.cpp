#include "common/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "common/text.hpp"

namespace common {

HostPort parse_host_port(const std::string& text) {
    size_t colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw std::invalid_argument("expected host:port, got '" + text + "'");
    uint64_t port = 0;
    if (!parse_u64(std::string_view(text).substr(colon + 1), port) || port > 65535)
        throw std::invalid_argument("bad port in '" + text + "'");
    return HostPort{text.substr(0, colon), static_cast<uint16_t>(port)};
}

sockaddr_in resolve_ipv4(const std::string& host, uint16_t port) {
    sockaddr_in out{};
    out.sin_family = AF_INET;
    out.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &out.sin_addr) == 1) return out;

    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* res = nullptr;
    int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
    if (rc != 0 || res == nullptr)
        throw std::runtime_error("cannot resolve host '" + host + "': " + gai_strerror(rc));
    out.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    freeaddrinfo(res);
    return out;
}

bool is_multicast_ipv4(const sockaddr_in& addr) {
    uint32_t ip = ntohl(addr.sin_addr.s_addr);
    return (ip & 0xF0000000u) == 0xE0000000u;  // 224.0.0.0/4
}

std::string local_hostname() {
    char buf[256] = {0};
    if (gethostname(buf, sizeof(buf) - 1) != 0) return "localhost";
    return buf;
}

void Fd::reset(int fd) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
}

}  // namespace common
