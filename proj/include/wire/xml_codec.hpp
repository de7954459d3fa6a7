#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wire/packet.hpp"

namespace wire {

inline constexpr size_t kDefaultMaxDatagram = 8192;

// Encodes one packet as a single XML document:
//   <metrics host="H" t="T"><metric name="N" val="V" units="U" .../></metrics>
// Attribute order is fixed, so identical packets encode to identical bytes.
// Values are printed with up to 3 fractional digits, trailing zeros trimmed.
// Throws std::invalid_argument on invalid packets.
std::string encode_xml(const MetricPacket& packet);

// Encodes a packet into one or more datagrams, each at most max_datagram
// bytes. Splitting happens between metrics, never inside one; metric order
// is preserved and every datagram is an independently decodable document.
// Throws std::length_error if a single metric cannot fit.
std::vector<std::string> encode_datagrams(const MetricPacket& packet, size_t max_datagram = kDefaultMaxDatagram);

// Strict parser for the grammar above. Unknown attributes are ignored.
// Returns nullopt on any malformed input; if error is non-null it receives
// a short description.
std::optional<MetricPacket> decode_xml(std::string_view data, std::string* error = nullptr);

}  // namespace wire
