#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>

#include "common/net.hpp"
#include "wire/packet.hpp"
#include "wire/xml_codec.hpp"

namespace wire {

inline constexpr uint16_t kDefaultPort = 8649;

enum class TransportMode { Unicast, Multicast };

struct TransportConfig {
    TransportMode mode = TransportMode::Unicast;
    std::string addr = "127.0.0.1";  // host for unicast, group for multicast
    uint16_t port = kDefaultPort;
    size_t max_datagram = kDefaultMaxDatagram;
};

TransportMode transport_mode_from_string(const std::string& s);

// Fire-and-forget UDP sender. No acknowledgement, no retransmission;
// datagram loss is not an error. Construction throws std::runtime_error
// on socket failure or a multicast config whose address is not in the
// multicast range.
class UdpSender {
public:
    explicit UdpSender(const TransportConfig& config);

    // Returns the number of datagrams emitted (>1 when the packet was
    // split at max_datagram). Throws std::runtime_error on socket errors;
    // unreachable destinations are not errors.
    size_t send(const MetricPacket& packet);

private:
    TransportConfig config_;
    sockaddr_in dest_{};
    common::Fd fd_;
};

// Receives datagrams and hands each decodable packet to a callback, in
// arrival order. Invalid datagrams increment dropped() and are discarded.
class UdpReceiver {
public:
    // Binds (and joins the group when multicast). Throws std::runtime_error
    // on bind/join failure. Port 0 binds an ephemeral port; see port().
    explicit UdpReceiver(const TransportConfig& config);

    // Blocks until stop() is called from another thread.
    void run(const std::function<void(const MetricPacket&)>& sink);
    void stop() { stopping_ = true; }

    uint16_t port() const { return port_; }
    uint64_t dropped() const { return dropped_; }
    uint64_t received() const { return received_; }

private:
    common::Fd fd_;
    uint16_t port_ = 0;
    size_t max_datagram_;
    std::atomic<bool> stopping_{false};
    std::atomic<uint64_t> dropped_{0};
    std::atomic<uint64_t> received_{0};
};

}  // namespace wire
