#pragma once

// Packet blocks: n payloads of z bytes, each carrying one symbol of z parallel
// binary codewords. Encoding and decoding act on whole payloads with XOR and
// copy, which is the same as running the binary code on every byte column.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmfec/erasure_pattern.hpp"
#include "rmfec/rm_code.hpp"
#include "rmfec/schedule.hpp"

namespace rmfec {

using Payload = std::vector<std::uint8_t>;

struct PacketBlock {
  CodeParams params;
  std::size_t z = 0;
  std::vector<std::optional<Payload>> slots;  // n entries; nullopt = erased

  static PacketBlock erased(const CodeParams& params, std::size_t z);

  ErasurePattern pattern() const;
  // Throws ContractViolation on a wrong slot count or a payload of length != z.
  void validate() const;

  bool operator==(const PacketBlock&) const = default;
};

// Plotkin encoding of k equal-length source payloads.
PacketBlock encode_block(std::span<const Payload> source, const CodeParams& params);

// Runs the schedule over the block's payloads. The block's erasure pattern
// must equal the pattern the schedule was built for.
PacketBlock replay(const Schedule& schedule, const PacketBlock& block);

struct ReplayOutput {
  PacketBlock block;
  std::vector<Payload> message;  // k source payloads; empty unless schedule.success
};
ReplayOutput replay_with_message(const Schedule& schedule, const PacketBlock& block);

// ---- framing --------------------------------------------------------------

// Header: "RMPK", version u8, r u8, m u8, block_id u32, slot u16, z u32,
// little-endian, followed by z payload bytes.
inline constexpr std::uint8_t kPacketFormatVersion = 1;
inline constexpr std::size_t kPacketHeaderSize = 17;

struct PacketFrame {
  int r = 0;
  int m = 1;
  std::uint32_t block_id = 0;
  std::uint16_t slot = 0;
  Payload payload;

  bool operator==(const PacketFrame&) const = default;
};

std::vector<std::uint8_t> frame_packet(const CodeParams& params, std::uint32_t block_id,
                                       std::uint16_t slot, std::span<const std::uint8_t> payload);

struct DeframedPacket {
  PacketFrame frame;
  std::size_t frame_size = 0;  // header + payload bytes consumed
};

// Parses one frame from the front of `bytes`; trailing bytes are left for the
// caller. Throws MalformedPacket on bad magic, version, code or slot bounds,
// or truncation.
DeframedPacket deframe_packet(std::span<const std::uint8_t> bytes);

}  // namespace rmfec
