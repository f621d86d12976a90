#include "rmfec/schedule.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

constexpr char kScheduleMagic[4] = {'R', 'M', 'S', 'C'};
constexpr std::size_t kHeaderSize = 4 + 1 + 4 + 4;
constexpr std::size_t kRecordSize = 1 + 4 + 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

OpCount op_count(std::span<const ScheduleOp> ops) {
  OpCount c;
  for (const ScheduleOp& op : ops) {
    if (op.code == OpCode::kCopy) {
      ++c.copies;
    } else {
      ++c.xors;
    }
  }
  return c;
}

std::string check_schedule(const Schedule& s) {
  enum : std::uint8_t { kUnwritten, kOpen, kDone };
  if (s.received.size() != s.n || s.recovered.size() != s.n) return "mask length differs from n";
  if (s.slot_count < s.n) return "slot_count below n";
  std::vector<std::uint8_t> state(s.slot_count, kUnwritten);
  std::vector<bool> read_only(s.slot_count, false);
  for (std::size_t i = 0; i < s.n; ++i) {
    if (s.received.is_known(i)) {
      state[i] = kDone;
      read_only[i] = true;
    }
  }
  std::uint32_t open = ScheduleBuilder::kNone;
  for (std::size_t i = 0; i < s.ops.size(); ++i) {
    const ScheduleOp& op = s.ops[i];
    const std::string where = "op " + std::to_string(i) + ": ";
    if (op.src >= s.slot_count || op.dst >= s.slot_count) return where + "slot out of range";
    if (read_only[op.dst]) return where + "writes received slot " + std::to_string(op.dst);
    // A run ends at the first op that starts another one.
    if (op.code == OpCode::kCopy && open != ScheduleBuilder::kNone) {
      state[open] = kDone;
      open = ScheduleBuilder::kNone;
    }
    if (state[op.src] != kDone) return where + "reads unfinished slot " + std::to_string(op.src);
    if (op.code == OpCode::kCopy) {
      if (state[op.dst] != kUnwritten) return where + "slot " + std::to_string(op.dst) + " written twice";
      open = op.dst;
      state[open] = kOpen;
    } else if (op.dst != open) {
      return where + "XOR into slot " + std::to_string(op.dst) + " outside its write run";
    }
  }
  for (std::size_t i = 0; i < s.n; ++i) {
    if (s.received.is_known(i) && !s.recovered.is_known(i)) return "recovered mask lost a received position";
    if (s.recovered.is_known(i) && state[i] == kUnwritten) {
      return "position " + std::to_string(i) + " marked recovered but never written";
    }
  }
  if (s.success && !s.recovered.complete()) return "success with incomplete recovered mask";
  for (std::uint32_t slot : s.message_slots) {
    if (slot >= s.slot_count || state[slot] == kUnwritten) return "message slot not filled";
  }
  return {};
}

std::vector<std::uint8_t> serialize_ops(const Schedule& s) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + kRecordSize * s.ops.size());
  out.insert(out.end(), kScheduleMagic, kScheduleMagic + 4);
  out.push_back(kScheduleFormatVersion);
  put_u32(out, s.slot_count);
  put_u32(out, static_cast<std::uint32_t>(s.ops.size()));
  for (const ScheduleOp& op : s.ops) {
    out.push_back(static_cast<std::uint8_t>(op.code));
    put_u32(out, op.src);
    put_u32(out, op.dst);
  }
  return out;
}

SerializedOps deserialize_ops(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw FormatError("schedule: truncated header");
  if (std::memcmp(bytes.data(), kScheduleMagic, 4) != 0) throw FormatError("schedule: bad magic");
  if (bytes[4] != kScheduleFormatVersion) {
    throw FormatError("schedule: unsupported version " + std::to_string(bytes[4]));
  }
  SerializedOps out;
  out.slot_count = get_u32(bytes.data() + 5);
  const std::uint32_t count = get_u32(bytes.data() + 9);
  if (bytes.size() != kHeaderSize + std::size_t{count} * kRecordSize) {
    throw FormatError("schedule: length does not match op count");
  }
  out.ops.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint8_t* rec = bytes.data() + kHeaderSize + std::size_t{i} * kRecordSize;
    if (rec[0] > static_cast<std::uint8_t>(OpCode::kXor)) throw FormatError("schedule: bad opcode");
    ScheduleOp op{static_cast<OpCode>(rec[0]), get_u32(rec + 1), get_u32(rec + 5)};
    if (op.src >= out.slot_count || op.dst >= out.slot_count) {
      throw FormatError("schedule: slot index out of range");
    }
    out.ops.push_back(op);
  }
  return out;
}

void run_ops(std::span<const ScheduleOp> ops, SlotArena& arena) {
  const std::size_t z = arena.z();
  if (z == 0) return;
  for (const ScheduleOp& op : ops) {
    const std::uint8_t* __restrict src = arena.slot(op.src).data();
    std::uint8_t* __restrict dst = arena.slot(op.dst).data();
    if (op.code == OpCode::kCopy) {
      std::memcpy(dst, src, z);
    } else {
      for (std::size_t i = 0; i < z; ++i) dst[i] ^= src[i];
    }
  }
}

// ---------------------------------------------------------------------------

ScheduleBuilder::ScheduleBuilder(const ErasurePattern& received)
    : n_(received.size()), received_(received), slot_count_(static_cast<std::uint32_t>(n_)) {
  entries_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    entries_[i].home = static_cast<std::uint32_t>(i);
    if (received.is_known(i)) entries_[i].slot = static_cast<std::uint32_t>(i);
  }
}

ScheduleBuilder::EntryId ScheduleBuilder::add_unknown() {
  entries_.push_back(Entry{});
  return static_cast<EntryId>(entries_.size() - 1);
}

ScheduleBuilder::EntryId ScheduleBuilder::add_sum(EntryId a, EntryId b) {
  if (!known(a) || !known(b)) throw std::logic_error("add_sum over an unknown entry");
  Entry e;
  e.lhs = a;
  e.rhs = b;
  entries_.push_back(e);
  return static_cast<EntryId>(entries_.size() - 1);
}

void ScheduleBuilder::collect_terms(EntryId id, std::vector<std::uint32_t>& terms) {
  const Entry e = entries_[id];
  if (e.slot != kNone) {
    terms.push_back(e.slot);
  } else if (e.lhs == kNone) {
    throw std::logic_error("schedule reads an unknown entry");
  } else if (e.reads == 0) {
    // First use: inline the two operands instead of spending a scratch slot.
    touch(id);
    entries_[id].reads = 1;
    collect_terms(e.lhs, terms);
    collect_terms(e.rhs, terms);
  } else {
    terms.push_back(materialize(id));
  }
}

void ScheduleBuilder::emit_run(std::uint32_t dst, std::vector<std::uint32_t>& terms) {
  // x ^ x = 0: drop slots that occur an even number of times.
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) & 1u) terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
  if (terms.empty()) throw std::logic_error("recovered symbol reduces to the zero combination");
  ops_.push_back({OpCode::kCopy, terms[0], dst});
  for (std::size_t i = 1; i < terms.size(); ++i) ops_.push_back({OpCode::kXor, terms[i], dst});
}

std::uint32_t ScheduleBuilder::materialize(EntryId id) {
  const Entry e = entries_[id];
  if (e.slot != kNone) return e.slot;
  if (e.lhs == kNone) throw std::logic_error("materializing an unknown entry");
  std::vector<std::uint32_t> terms;
  collect_terms(e.lhs, terms);
  collect_terms(e.rhs, terms);
  const std::uint32_t slot = slot_count_++;
  emit_run(slot, terms);
  touch(id);
  entries_[id].slot = slot;
  return slot;
}

void ScheduleBuilder::write(EntryId dst, std::span<const EntryId> sources) {
  if (known(dst)) throw std::logic_error("schedule writes a known entry");
  if (sources.empty()) throw std::logic_error("write with no sources");
  std::vector<std::uint32_t> terms;
  for (EntryId s : sources) collect_terms(s, terms);
  const std::uint32_t home = entries_[dst].home;
  const std::uint32_t slot = home != kNone ? home : slot_count_++;
  emit_run(slot, terms);
  touch(dst);
  entries_[dst].slot = slot;
}

void ScheduleBuilder::rollback(const Checkpoint& cp) {
  while (trail_.size() > cp.trail) {
    auto& [id, old] = trail_.back();
    if (id < entries_.size()) entries_[id] = old;
    trail_.pop_back();
  }
  entries_.resize(cp.entries);
  ops_.resize(cp.ops);
  slot_count_ = cp.slots;
}

Schedule ScheduleBuilder::release() {
  Schedule s;
  s.n = n_;
  s.slot_count = slot_count_;
  s.ops = std::move(ops_);
  s.extraction_begin = s.ops.size();
  s.received = received_;
  ops_.clear();
  return s;
}

}  // namespace rmfec
