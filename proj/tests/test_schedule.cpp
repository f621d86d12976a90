#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rmfec/blank_decoder.hpp"
#include "rmfec/errors.hpp"
#include "rmfec/schedule.hpp"

using namespace rmfec;

namespace {

ErasurePattern random_pattern(std::mt19937_64& rng, std::size_t n, std::size_t known) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  return ErasurePattern::from_prefix(n, order, known);
}

Schedule hand_schedule() {
  // n = 4, slots 0 and 1 received; slot 2 = s0 ^ s1, slot 3 = s2, scratch 4 = s0.
  Schedule s;
  s.n = 4;
  s.slot_count = 5;
  s.received = ErasurePattern::from_known(4, std::vector<std::size_t>{0, 1});
  s.recovered = ErasurePattern::all_known(4);
  s.success = true;
  s.ops = {{OpCode::kCopy, 0, 2}, {OpCode::kXor, 1, 2}, {OpCode::kCopy, 2, 3}, {OpCode::kCopy, 0, 4}};
  s.extraction_begin = 3;
  return s;
}

}  // namespace

TEST_CASE("check_schedule accepts a well-formed schedule") {
  const Schedule s = hand_schedule();
  CHECK(check_schedule(s).empty());
  CHECK(op_count(s) == OpCount{3, 1});
  CHECK(op_count(s.decode_ops()) == OpCount{2, 1});
  CHECK(op_count(s.extraction_ops()) == OpCount{1, 0});
}

TEST_CASE("check_schedule rejects each kind of violation") {
  Schedule s = hand_schedule();
  s.ops[0].dst = 1;
  CHECK(check_schedule(s).find("received") != std::string::npos);

  s = hand_schedule();
  s.ops[2].src = 4;
  CHECK(check_schedule(s).find("unfinished") != std::string::npos);

  s = hand_schedule();
  s.ops.push_back({OpCode::kCopy, 0, 2});
  CHECK(check_schedule(s).find("twice") != std::string::npos);

  s = hand_schedule();
  s.ops.push_back({OpCode::kXor, 1, 2});
  CHECK(check_schedule(s).find("outside") != std::string::npos);

  s = hand_schedule();
  s.ops[1].src = 9;
  CHECK(check_schedule(s).find("range") != std::string::npos);

  s = hand_schedule();
  s.ops.pop_back();
  s.ops.pop_back();
  CHECK(check_schedule(s).find("never written") != std::string::npos);

  s = hand_schedule();
  s.recovered = s.received;
  CHECK(check_schedule(s).find("success") != std::string::npos);
}

TEST_CASE("run_ops executes copy and xor per byte") {
  const Schedule s = hand_schedule();
  SlotArena arena(s.slot_count, 3);
  const std::uint8_t a[] = {1, 2, 3}, b[] = {0xF0, 0x0F, 0xFF};
  std::copy(a, a + 3, arena.slot(0).begin());
  std::copy(b, b + 3, arena.slot(1).begin());
  run_ops(s.ops, arena);
  for (int i = 0; i < 3; ++i) {
    CHECK(arena.slot(2)[i] == (a[i] ^ b[i]));
    CHECK(arena.slot(3)[i] == (a[i] ^ b[i]));
    CHECK(arena.slot(4)[i] == a[i]);
  }
}

TEST_CASE("serialization round trip and format errors") {
  const Schedule s = hand_schedule();
  const auto bytes = serialize_ops(s);
  CHECK(bytes.size() == 13 + 9 * s.ops.size());
  CHECK(bytes[0] == 'R');
  CHECK(bytes[4] == kScheduleFormatVersion);
  const SerializedOps back = deserialize_ops(bytes);
  CHECK(back.slot_count == s.slot_count);
  CHECK(back.ops == s.ops);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(deserialize_ops(bad), FormatError);
  bad = bytes;
  bad[4] = 2;
  CHECK_THROWS_AS(deserialize_ops(bad), FormatError);
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS_AS(deserialize_ops(bad), FormatError);
  bad = bytes;
  bad[13] = 7;  // opcode
  CHECK_THROWS_AS(deserialize_ops(bad), FormatError);
  bad = bytes;
  bad[14] = 200;  // src beyond slot_count
  CHECK_THROWS_AS(deserialize_ops(bad), FormatError);
  CHECK_THROWS_AS(deserialize_ops(std::vector<std::uint8_t>{}), FormatError);
}

TEST_CASE("builder: pending sums are expanded, duplicates cancel, rollback restores") {
  ScheduleBuilder b(ErasurePattern::from_known(4, std::vector<std::size_t>{0, 1, 2}));
  const auto s01 = b.add_sum(0, 1);
  const auto s012 = b.add_sum(s01, 2);
  CHECK(b.known(s012));
  CHECK(b.ops().empty());
  // 3 := (0 ^ 1 ^ 2) ^ 1 = 0 ^ 2
  b.write(3, {s012, 1});
  REQUIRE(b.ops().size() == 2);
  CHECK(b.ops()[0] == ScheduleOp{OpCode::kCopy, 0, 3});
  CHECK(b.ops()[1] == ScheduleOp{OpCode::kXor, 2, 3});

  ScheduleBuilder c(ErasurePattern::from_known(4, std::vector<std::size_t>{0, 1}));
  const auto cp = c.checkpoint();
  const auto sum = c.add_sum(0, 1);
  c.write(2, {sum});
  CHECK(c.known(2));
  c.rollback(cp);
  CHECK_FALSE(c.known(2));
  CHECK(c.ops().empty());
  CHECK(c.slot_count() == 4);
}

TEST_CASE("builder: a sum read twice is materialized once") {
  ScheduleBuilder b(ErasurePattern::from_known(4, std::vector<std::size_t>{0, 1}));
  const auto sum = b.add_sum(0, 1);
  const auto slot = b.materialize(sum);
  CHECK(slot >= 4);
  CHECK(b.materialize(sum) == slot);
  CHECK(op_count(b.ops()) == OpCount{1, 1});
}

TEST_CASE("op_count examples") {
  for (int m = 1; m <= 7; ++m) {
    const CodeParams p = code_params(0, m);
    const Schedule s = build_schedule(ErasurePattern::from_known(p.n, std::vector<std::size_t>{p.n - 1}), p,
                                      DecodeOptions::full(), FallbackPolicy::kNone);
    CHECK(s.success);
    CHECK(op_count(s.decode_ops()) == OpCount{p.n - 1, 0});
    CHECK(check_schedule(s).empty());
  }
  // Complete reception: only message extraction, no decode ops.
  for (auto [r, m] : {std::pair{1, 3}, std::pair{3, 7}, std::pair{6, 9}}) {
    const CodeParams p = code_params(r, m);
    const Schedule s = build_schedule(ErasurePattern::all_known(p.n), p, DecodeOptions::full(), FallbackPolicy::kNone);
    CHECK(s.success);
    CHECK(s.decode_ops().empty());
    CHECK(s.message_slots.size() == p.k);
    CHECK(check_schedule(s).empty());
  }
}

TEST_CASE("built schedules satisfy the write-once discipline and are reproducible") {
  std::mt19937_64 rng(41);
  const FallbackPolicy policies[] = {FallbackPolicy::kNone, FallbackPolicy::kGeAfterPartial, FallbackPolicy::kGeOnly};
  const DecodeOptions variants[] = {DecodeOptions::classical(), DecodeOptions::permutation_only(),
                                    DecodeOptions::partial_only(), DecodeOptions::full()};
  for (auto [r, m] : {std::pair{1, 3}, std::pair{2, 4}, std::pair{2, 5}, std::pair{3, 6}, std::pair{3, 7}}) {
    const CodeParams p = code_params(r, m);
    for (int iter = 0; iter < 60; ++iter) {
      const ErasurePattern pat = random_pattern(rng, p.n, p.k + rng() % (p.n - p.k + 1));
      for (const auto& opts : variants) {
        for (FallbackPolicy pol : policies) {
          const BlankDecoder dec(p, opts, pol);
          const Schedule s = dec.build(pat);
          INFO(p.name(), " policy ", policy_name(pol));
          REQUIRE(check_schedule(s) == "");
          REQUIRE(s.received == pat);
          REQUIRE(s.success == dec.decodable(pat));
          REQUIRE(s.success == s.recovered.complete());
          REQUIRE(s.message_slots.size() == (s.success ? p.k : 0));
          const Schedule again = dec.build(pat);
          REQUIRE(again.ops == s.ops);
          REQUIRE(serialize_ops(again) == serialize_ops(s));
        }
      }
    }
  }
}

TEST_CASE("policy names") {
  for (FallbackPolicy p : {FallbackPolicy::kNone, FallbackPolicy::kGeAfterPartial, FallbackPolicy::kGeOnly})
    CHECK(parse_policy(policy_name(p)) == p);
  CHECK(policy_name(FallbackPolicy::kGeAfterPartial) == "ge_after_partial");
  CHECK_FALSE(parse_policy("bogus").has_value());
}
