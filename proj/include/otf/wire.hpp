#pragma once

#include "otf/packet.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace otf::wire {

/// Canonical little-endian encoding:
///
///   source: u8 tag=0 | u64 seq                                   | u32 len | len x u8
///   repair: u8 tag=1 | u64 repair_id | u64 first | u64 last | u64 seed | u32 len | len x u8
///
/// The transmission slot is simulator bookkeeping and is not encoded.
std::vector<std::uint8_t> serialize(const source_packet& pkt);
std::vector<std::uint8_t> serialize(const repair_packet& pkt);
std::vector<std::uint8_t> serialize(const packet& pkt);

/// Throws std::invalid_argument on truncated or malformed input.
packet deserialize(std::span<const std::uint8_t> bytes);

} // namespace otf::wire
