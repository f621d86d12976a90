#include "rmfec/block_file.hpp"

#include <algorithm>
#include <cstring>
#include <map>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

constexpr char kTrailerMagic[4] = {'R', 'M', 'L', 'N'};
constexpr char kPacketMagic[4] = {'R', 'M', 'P', 'K'};

bool has_magic(std::span<const std::uint8_t> bytes, std::size_t pos, const char (&magic)[4]) {
  return bytes.size() - pos >= 4 && std::memcmp(bytes.data() + pos, magic, 4) == 0;
}

std::size_t next_magic(std::span<const std::uint8_t> bytes, std::size_t from) {
  for (std::size_t p = from; p < bytes.size(); ++p) {
    if (has_magic(bytes, p, kPacketMagic) || has_magic(bytes, p, kTrailerMagic)) return p;
  }
  return bytes.size();
}

std::size_t block_count(std::uint64_t length, std::size_t block_bytes) {
  return std::max<std::size_t>(1, static_cast<std::size_t>((length + block_bytes - 1) / block_bytes));
}

}  // namespace

std::vector<std::uint8_t> length_trailer(std::uint64_t length) {
  std::vector<std::uint8_t> out(kTrailerMagic, kTrailerMagic + 4);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(length >> (8 * i)));
  return out;
}

std::vector<std::uint8_t> encode_file(std::span<const std::uint8_t> data, const CodeParams& params,
                                      std::size_t z) {
  if (z == 0) throw ContractViolation("encode_file: packet size must be at least 1 byte");
  const std::size_t block_bytes = params.k * z;
  const std::size_t blocks = block_count(data.size(), block_bytes);
  if (blocks > std::size_t{0xFFFFFFFFu}) throw ContractViolation("encode_file: too many blocks");

  std::vector<std::uint8_t> out;
  out.reserve(blocks * params.n * (kPacketHeaderSize + z) + kTrailerSize);
  std::vector<Payload> source(params.k, Payload(z));
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < params.k; ++i) {
      std::fill(source[i].begin(), source[i].end(), 0);
      const std::size_t begin = b * block_bytes + i * z;
      if (begin < data.size()) {
        const std::size_t len = std::min(z, data.size() - begin);
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(begin), len, source[i].begin());
      }
    }
    const PacketBlock block = encode_block(source, params);
    for (std::size_t i = 0; i < params.n; ++i) {
      const auto frame = frame_packet(params, static_cast<std::uint32_t>(b),
                                      static_cast<std::uint16_t>(i), *block.slots[i]);
      out.insert(out.end(), frame.begin(), frame.end());
    }
  }
  const auto trailer = length_trailer(data.size());
  out.insert(out.end(), trailer.begin(), trailer.end());
  return out;
}

BlockFileParts parse_block_file(std::span<const std::uint8_t> bytes) {
  BlockFileParts parts;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (has_magic(bytes, pos, kTrailerMagic) && bytes.size() - pos >= kTrailerSize) {
      std::uint64_t length = 0;
      for (int i = 0; i < 8; ++i) length |= std::uint64_t{bytes[pos + 4 + i]} << (8 * i);
      parts.length = length;
      pos += kTrailerSize;
      continue;
    }
    try {
      DeframedPacket d = deframe_packet(bytes.subspan(pos));
      parts.frames.push_back(std::move(d.frame));
      pos += d.frame_size;
    } catch (const MalformedPacket&) {
      ++parts.malformed;
      pos = next_magic(bytes, pos + 1);
    }
  }
  return parts;
}

FileDecodeResult decode_file(std::span<const std::uint8_t> bytes, const DecodeOptions& opts,
                             FallbackPolicy policy) {
  BlockFileParts parts = parse_block_file(bytes);
  if (!parts.length) throw FormatError("block file has no length trailer");
  FileDecodeResult result;
  result.malformed_frames = parts.malformed;
  if (parts.frames.empty()) {
    result.success = *parts.length == 0;
    return result;
  }

  // The first valid frame fixes the code and packet size; disagreeing frames
  // are treated as erasures.
  const PacketFrame& first = parts.frames.front();
  const CodeParams params = code_params(first.r, first.m);
  const std::size_t z = first.payload.size();
  if (z == 0) throw FormatError("block file packets are empty");
  const std::size_t blocks = block_count(*parts.length, params.k * z);

  std::map<std::uint32_t, PacketBlock> by_block;
  for (PacketFrame& f : parts.frames) {
    if (f.r != params.r || f.m != params.m || f.payload.size() != z || f.block_id >= blocks) {
      ++result.malformed_frames;
      continue;
    }
    auto [it, inserted] = by_block.try_emplace(f.block_id, PacketBlock::erased(params, z));
    it->second.slots[f.slot] = std::move(f.payload);
  }

  const BlankDecoder decoder(params, opts, policy);
  result.blocks = blocks;
  result.data.reserve(blocks * params.k * z);
  for (std::uint32_t b = 0; b < blocks; ++b) {
    auto it = by_block.find(b);
    const PacketBlock block = it != by_block.end() ? it->second : PacketBlock::erased(params, z);
    const Schedule schedule = decoder.build(block.pattern());
    if (!schedule.success) {
      ++result.failed_blocks;
      result.data.resize(result.data.size() + params.k * z);
      continue;
    }
    const ReplayOutput out = replay_with_message(schedule, block);
    for (const Payload& p : out.message) result.data.insert(result.data.end(), p.begin(), p.end());
  }
  result.data.resize(static_cast<std::size_t>(std::min<std::uint64_t>(*parts.length, result.data.size())));
  result.success = result.failed_blocks == 0;
  return result;
}

}  // namespace rmfec
