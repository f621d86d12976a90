#include "rmfec/packet_block.hpp"

#include <algorithm>
#include <cstring>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

constexpr char kPacketMagic[4] = {'R', 'M', 'P', 'K'};

void xor_into(Payload& dst, const Payload& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

// Encodes source[offset, offset + k(r,m)) into out[pos, pos + 2^m).
void encode_payloads(std::span<const Payload> source, std::size_t offset, int r, int m,
                     std::vector<Payload>& out, std::size_t pos) {
  const std::size_t n = std::size_t{1} << m;
  if (r == 0) {
    for (std::size_t i = 0; i < n; ++i) out[pos + i] = source[offset];
    return;
  }
  if (r >= m) {
    for (std::size_t i = 0; i < n; ++i) out[pos + i] = source[offset + i];
    return;
  }
  const std::size_t half = n / 2;
  encode_payloads(source, offset, r, m - 1, out, pos);
  encode_payloads(source, offset + rm_dimension(r, m - 1), r - 1, m - 1, out, pos + half);
  for (std::size_t i = 0; i < half; ++i) xor_into(out[pos + half + i], out[pos + i]);
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T{p[i]} << (8 * i));
  return v;
}

SlotArena load_arena(const Schedule& schedule, const PacketBlock& block) {
  block.validate();
  if (schedule.n != block.params.n) throw ContractViolation("replay: schedule built for another code");
  if (block.pattern() != schedule.received) {
    throw ContractViolation("replay: block erasure pattern differs from the schedule's");
  }
  SlotArena arena(schedule.slot_count, block.z);
  for (std::size_t i = 0; i < block.slots.size(); ++i) {
    if (block.slots[i]) std::copy(block.slots[i]->begin(), block.slots[i]->end(), arena.slot(i).begin());
  }
  run_ops(schedule.ops, arena);
  return arena;
}

PacketBlock collect_block(const Schedule& schedule, const PacketBlock& block, const SlotArena& arena) {
  PacketBlock out = block;
  for (std::size_t i = 0; i < out.slots.size(); ++i) {
    if (!out.slots[i] && schedule.recovered.is_known(i)) {
      auto s = arena.slot(i);
      out.slots[i] = Payload(s.begin(), s.end());
    }
  }
  return out;
}

}  // namespace

PacketBlock PacketBlock::erased(const CodeParams& params, std::size_t z) {
  PacketBlock b;
  b.params = params;
  b.z = z;
  b.slots.resize(params.n);
  return b;
}

ErasurePattern PacketBlock::pattern() const {
  BitVector known(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) known.set(i);
  }
  return ErasurePattern(std::move(known));
}

void PacketBlock::validate() const {
  if (slots.size() != params.n) {
    throw ContractViolation("packet block has " + std::to_string(slots.size()) + " slots, " +
                            params.name() + " needs " + std::to_string(params.n));
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i] && slots[i]->size() != z) {
      throw ContractViolation("packet " + std::to_string(i) + " has " +
                              std::to_string(slots[i]->size()) + " bytes, block z is " +
                              std::to_string(z));
    }
  }
}

PacketBlock encode_block(std::span<const Payload> source, const CodeParams& params) {
  if (source.size() != params.k) {
    throw ContractViolation(params.name() + " encode_block: got " + std::to_string(source.size()) +
                            " source payloads, need " + std::to_string(params.k));
  }
  const std::size_t z = source.front().size();
  for (const Payload& p : source) {
    if (p.size() != z) throw ContractViolation("encode_block: ragged source payloads");
  }
  std::vector<Payload> out(params.n);
  encode_payloads(source, 0, params.r, params.m, out, 0);

  PacketBlock block = PacketBlock::erased(params, z);
  for (std::size_t i = 0; i < params.n; ++i) block.slots[i] = std::move(out[i]);
  return block;
}

PacketBlock replay(const Schedule& schedule, const PacketBlock& block) {
  const SlotArena arena = load_arena(schedule, block);
  return collect_block(schedule, block, arena);
}

ReplayOutput replay_with_message(const Schedule& schedule, const PacketBlock& block) {
  const SlotArena arena = load_arena(schedule, block);
  ReplayOutput out{collect_block(schedule, block, arena), {}};
  if (schedule.success) {
    out.message.reserve(schedule.message_slots.size());
    for (std::uint32_t slot : schedule.message_slots) {
      auto s = arena.slot(slot);
      out.message.emplace_back(s.begin(), s.end());
    }
  }
  return out;
}

std::vector<std::uint8_t> frame_packet(const CodeParams& params, std::uint32_t block_id,
                                       std::uint16_t slot, std::span<const std::uint8_t> payload) {
  if (slot >= params.n) throw ContractViolation("frame_packet: slot out of range for " + params.name());
  std::vector<std::uint8_t> out;
  out.reserve(kPacketHeaderSize + payload.size());
  out.insert(out.end(), kPacketMagic, kPacketMagic + 4);
  out.push_back(kPacketFormatVersion);
  out.push_back(static_cast<std::uint8_t>(params.r));
  out.push_back(static_cast<std::uint8_t>(params.m));
  put_le<std::uint32_t>(out, block_id);
  put_le<std::uint16_t>(out, slot);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

DeframedPacket deframe_packet(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPacketHeaderSize) throw MalformedPacket("truncated packet header");
  if (std::memcmp(bytes.data(), kPacketMagic, 4) != 0) throw MalformedPacket("bad packet magic");
  if (bytes[4] != kPacketFormatVersion) {
    throw MalformedPacket("unsupported packet version " + std::to_string(bytes[4]));
  }
  DeframedPacket out;
  out.frame.r = bytes[5];
  out.frame.m = bytes[6];
  if (out.frame.m < 1 || out.frame.m > kMaxLogLength || out.frame.r > out.frame.m) {
    throw MalformedPacket("invalid code RM(" + std::to_string(out.frame.r) + "," +
                          std::to_string(out.frame.m) + ")");
  }
  out.frame.block_id = get_le<std::uint32_t>(bytes.data() + 7);
  out.frame.slot = get_le<std::uint16_t>(bytes.data() + 11);
  if (std::size_t{out.frame.slot} >= (std::size_t{1} << out.frame.m)) {
    throw MalformedPacket("slot " + std::to_string(out.frame.slot) + " out of range");
  }
  const std::uint32_t z = get_le<std::uint32_t>(bytes.data() + 13);
  if (bytes.size() - kPacketHeaderSize < z) throw MalformedPacket("truncated packet payload");
  out.frame.payload.assign(bytes.begin() + kPacketHeaderSize, bytes.begin() + kPacketHeaderSize + z);
  out.frame_size = kPacketHeaderSize + z;
  return out;
}

}  // namespace rmfec
