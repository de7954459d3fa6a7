#include "loadgen/sink.hpp"

#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace loadgen {

ByteSink::ByteSink(const std::string& listen_addr) {
    auto hp = common::parse_host_port(listen_addr);
    sockaddr_in addr = common::resolve_ipv4(hp.host, hp.port);

    listen_fd_.reset(::socket(AF_INET, SOCK_STREAM, 0));
    if (!listen_fd_.valid()) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    setsockopt(listen_fd_.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(listen_fd_.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0)
        throw std::runtime_error("cannot bind " + listen_addr + ": " + std::strerror(errno));
    if (::listen(listen_fd_.get(), 16) != 0)
        throw std::runtime_error(std::string("listen: ") + std::strerror(errno));

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (getsockname(listen_fd_.get(), reinterpret_cast<sockaddr*>(&bound), &len) == 0)
        port_ = ntohs(bound.sin_port);
}

ByteSink::~ByteSink() { stop(); }

void ByteSink::start() {
    stopping_ = false;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void ByteSink::stop() {
    if (!accept_thread_.joinable()) return;
    stopping_ = true;
    accept_thread_.join();
    for (auto& w : workers_) w.join();
    workers_.clear();
}

void ByteSink::accept_loop() {
    while (!stopping_) {
        pollfd pfd{listen_fd_.get(), POLLIN, 0};
        int ready = ::poll(&pfd, 1, 100);
        if (ready <= 0) continue;
        int conn = ::accept(listen_fd_.get(), nullptr, nullptr);
        if (conn < 0) continue;
        ++connections_;
        workers_.emplace_back([this, conn] {
            common::Fd fd(conn);
            char buf[64 * 1024];
            while (!stopping_) {
                pollfd cp{fd.get(), POLLIN, 0};
                if (::poll(&cp, 1, 100) <= 0) continue;
                ssize_t n = ::read(fd.get(), buf, sizeof(buf));
                if (n <= 0) break;  // EOF or error: drop the connection
                total_bytes_ += static_cast<uint64_t>(n);
            }
        });
    }
}

}  // namespace loadgen
