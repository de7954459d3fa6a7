#include "wire/transport.hpp"

#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace wire {

TransportMode transport_mode_from_string(const std::string& s) {
    if (s == "unicast") return TransportMode::Unicast;
    if (s == "multicast") return TransportMode::Multicast;
    throw std::invalid_argument("unknown transport mode '" + s + "'");
}

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

UdpSender::UdpSender(const TransportConfig& config) : config_(config) {
    dest_ = common::resolve_ipv4(config.addr, config.port);
    if (config.mode == TransportMode::Multicast && !common::is_multicast_ipv4(dest_))
        throw std::runtime_error("address '" + config.addr + "' is not in the multicast range");

    fd_.reset(::socket(AF_INET, SOCK_DGRAM, 0));
    if (!fd_.valid()) throw_errno("socket");
    if (config.mode == TransportMode::Multicast) {
        unsigned char ttl = 1;
        unsigned char loop = 1;
        setsockopt(fd_.get(), IPPROTO_IP, IP_MULTICAST_TTL, &ttl, sizeof(ttl));
        setsockopt(fd_.get(), IPPROTO_IP, IP_MULTICAST_LOOP, &loop, sizeof(loop));
    }
}

size_t UdpSender::send(const MetricPacket& packet) {
    std::vector<std::string> datagrams = encode_datagrams(packet, config_.max_datagram);
    for (const auto& d : datagrams) {
        ssize_t n = ::sendto(fd_.get(), d.data(), d.size(), 0, reinterpret_cast<const sockaddr*>(&dest_),
                             sizeof(dest_));
        if (n < 0) {
            // UDP semantics: an unreachable peer surfaces as an ICMP error on a
            // later call; that is loss, not failure.
            if (errno == ECONNREFUSED || errno == EHOSTUNREACH || errno == ENETUNREACH) continue;
            throw_errno("sendto");
        }
    }
    return datagrams.size();
}

UdpReceiver::UdpReceiver(const TransportConfig& config) : max_datagram_(config.max_datagram) {
    sockaddr_in addr = common::resolve_ipv4(config.addr, config.port);
    if (config.mode == TransportMode::Multicast && !common::is_multicast_ipv4(addr))
        throw std::runtime_error("address '" + config.addr + "' is not in the multicast range");

    fd_.reset(::socket(AF_INET, SOCK_DGRAM, 0));
    if (!fd_.valid()) throw_errno("socket");

    int one = 1;
    setsockopt(fd_.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in bind_addr{};
    bind_addr.sin_family = AF_INET;
    bind_addr.sin_port = htons(config.port);
    bind_addr.sin_addr.s_addr = htonl(INADDR_ANY);
    if (config.mode == TransportMode::Unicast) bind_addr.sin_addr = addr.sin_addr;
    if (::bind(fd_.get(), reinterpret_cast<const sockaddr*>(&bind_addr), sizeof(bind_addr)) != 0)
        throw_errno("bind " + config.addr + ":" + std::to_string(config.port));

    if (config.mode == TransportMode::Multicast) {
        ip_mreq mreq{};
        mreq.imr_multiaddr = addr.sin_addr;
        mreq.imr_interface.s_addr = htonl(INADDR_ANY);
        if (setsockopt(fd_.get(), IPPROTO_IP, IP_ADD_MEMBERSHIP, &mreq, sizeof(mreq)) != 0)
            throw_errno("join multicast group " + config.addr);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (getsockname(fd_.get(), reinterpret_cast<sockaddr*>(&bound), &len) == 0) port_ = ntohs(bound.sin_port);

    timeval tv{0, 100 * 1000};  // poll for stop() every 100 ms
    setsockopt(fd_.get(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void UdpReceiver::run(const std::function<void(const MetricPacket&)>& sink) {
    std::vector<char> buf(max_datagram_ + 1);
    while (!stopping_) {
        ssize_t n = ::recvfrom(fd_.get(), buf.data(), buf.size(), 0, nullptr, nullptr);
        if (n < 0) {
            if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) continue;
            if (stopping_) break;
            throw_errno("recvfrom");
        }
        auto packet = decode_xml(std::string_view(buf.data(), static_cast<size_t>(n)));
        if (!packet) {
            ++dropped_;
            continue;
        }
        ++received_;
        sink(*packet);
    }
}

}  // namespace wire
