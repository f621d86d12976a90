#pragma once

// Block files: a byte stream cut into k*z-byte source blocks (last block
// zero-padded), each encoded into n framed packets, followed by a length
// trailer {"RMLN", u64 original length}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rmfec/blank_decoder.hpp"
#include "rmfec/packet_block.hpp"
#include "rmfec/rm_code.hpp"

namespace rmfec {

inline constexpr std::size_t kTrailerSize = 12;

// z >= 1. An empty input still yields one (all-zero) block.
std::vector<std::uint8_t> encode_file(std::span<const std::uint8_t> data, const CodeParams& params,
                                      std::size_t z);

std::vector<std::uint8_t> length_trailer(std::uint64_t length);

struct BlockFileParts {
  std::vector<PacketFrame> frames;
  std::optional<std::uint64_t> length;  // from the trailer
  std::size_t malformed = 0;            // damaged stretches skipped while resyncing
};
// Frames that fail validation are skipped (they count as erasures); parsing
// resumes at the next packet or trailer magic.
BlockFileParts parse_block_file(std::span<const std::uint8_t> bytes);

struct FileDecodeResult {
  bool success = false;
  std::vector<std::uint8_t> data;
  std::size_t blocks = 0;
  std::size_t failed_blocks = 0;
  std::size_t malformed_frames = 0;
};

// Throws FormatError when the trailer is missing or damaged.
FileDecodeResult decode_file(std::span<const std::uint8_t> bytes, const DecodeOptions& opts,
                             FallbackPolicy policy);

}  // namespace rmfec
