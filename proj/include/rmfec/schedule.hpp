#pragma once

// Blank-decoding schedules: an op list recorded once per loss pattern and
// replayed over every byte column of a packet block.
//
// Slot space: slots [0, n) are the codeword positions of the block, slots
// [n, slot_count) are scratch. Received slots are read-only; every other slot
// is written by exactly one run of the form COPY(src, s), XOR(src', s)...

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rmfec/erasure_pattern.hpp"

namespace rmfec {

enum class OpCode : std::uint8_t { kCopy = 0, kXor = 1 };

struct ScheduleOp {
  OpCode code;
  std::uint32_t src;
  std::uint32_t dst;

  bool operator==(const ScheduleOp&) const = default;
};

struct OpCount {
  std::size_t copies = 0;
  std::size_t xors = 0;

  std::size_t total() const { return copies + xors; }
  bool operator==(const OpCount&) const = default;
};

struct Schedule {
  std::size_t n = 0;
  std::uint32_t slot_count = 0;
  std::vector<ScheduleOp> ops;
  // ops[extraction_begin, end) turn a complete codeword into the message.
  std::size_t extraction_begin = 0;
  bool success = false;
  ErasurePattern received;
  ErasurePattern recovered;
  // Slot holding message bit i; filled only on success.
  std::vector<std::uint32_t> message_slots;
  // Permutation-search work: position pairs compared while selecting masks.
  std::uint64_t search_evaluations = 0;

  std::span<const ScheduleOp> decode_ops() const {
    return std::span(ops).first(extraction_begin);
  }
  std::span<const ScheduleOp> extraction_ops() const {
    return std::span(ops).subspan(extraction_begin);
  }
};

OpCount op_count(std::span<const ScheduleOp> ops);
inline OpCount op_count(const Schedule& s) { return op_count(s.ops); }

// Empty string when the write-once / read-after-write discipline holds,
// otherwise a description of the first violation.
std::string check_schedule(const Schedule& s);

// Wire form: "RMSC", version u8, slot_count u32, op_count u32, then one
// {opcode u8, src u32, dst u32} record per op. Little-endian.
inline constexpr std::uint8_t kScheduleFormatVersion = 1;
std::vector<std::uint8_t> serialize_ops(const Schedule& s);

struct SerializedOps {
  std::uint32_t slot_count = 0;
  std::vector<ScheduleOp> ops;
};
// Throws FormatError on bad magic, version, length or out-of-range slots.
SerializedOps deserialize_ops(std::span<const std::uint8_t> bytes);

// slot_count buffers of z bytes each, stored slot-major.
class SlotArena {
 public:
  SlotArena(std::size_t slot_count, std::size_t z) : z_(z), data_(slot_count * z) {}

  std::size_t z() const { return z_; }
  std::span<std::uint8_t> slot(std::size_t i) { return {data_.data() + i * z_, z_}; }
  std::span<const std::uint8_t> slot(std::size_t i) const { return {data_.data() + i * z_, z_}; }

 private:
  std::size_t z_;
  std::vector<std::uint8_t> data_;
};

void run_ops(std::span<const ScheduleOp> ops, SlotArena& arena);

// Records ops while a decoder walks an erasure pattern. Values are tracked as
// entries: an entry is a filled slot, a pending XOR of two known entries
// (materialized only when read), or unknown. Entries [0, n) are the codeword
// positions.
class ScheduleBuilder {
 public:
  using EntryId = std::uint32_t;
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  explicit ScheduleBuilder(const ErasurePattern& received);

  std::size_t n() const { return n_; }
  bool known(EntryId e) const { return entries_[e].slot != kNone || entries_[e].lhs != kNone; }

  EntryId add_unknown();
  // Entry whose value is a ^ b; both must be known.
  EntryId add_sum(EntryId a, EntryId b);

  // Fills unknown entry `dst` with the XOR of `sources`.
  void write(EntryId dst, std::span<const EntryId> sources);
  void write(EntryId dst, std::initializer_list<EntryId> sources) {
    write(dst, std::span<const EntryId>(sources.begin(), sources.size()));
  }
  // Slot holding the entry's value, emitting ops if it was still pending.
  std::uint32_t materialize(EntryId e);

  struct Checkpoint {
    std::size_t entries;
    std::size_t ops;
    std::uint32_t slots;
    std::size_t trail;
  };
  Checkpoint checkpoint() const { return {entries_.size(), ops_.size(), slot_count_, trail_.size()}; }
  void rollback(const Checkpoint& cp);

  std::span<const ScheduleOp> ops() const { return ops_; }
  std::uint32_t slot_count() const { return slot_count_; }

  // Moves the recorded ops into a schedule (other fields left to the caller).
  Schedule release();

 private:
  struct Entry {
    std::uint32_t slot = kNone;
    std::uint32_t lhs = kNone;
    std::uint32_t rhs = kNone;
    std::uint32_t home = kNone;  // slot to fill when written; kNone = fresh scratch
    std::uint32_t reads = 0;     // times a pending entry was expanded in place
  };

  void touch(EntryId e) { trail_.push_back({e, entries_[e]}); }
  void collect_terms(EntryId e, std::vector<std::uint32_t>& terms);
  void emit_run(std::uint32_t dst, std::vector<std::uint32_t>& terms);

  std::size_t n_;
  ErasurePattern received_;
  std::vector<Entry> entries_;
  std::vector<std::pair<EntryId, Entry>> trail_;
  std::vector<ScheduleOp> ops_;
  std::uint32_t slot_count_;
};

}  // namespace rmfec
