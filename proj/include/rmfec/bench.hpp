#pragma once

// Decode throughput and schedule cost on a fixed loss pattern.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmfec/erasure_pattern.hpp"
#include "rmfec/erasure_sim.hpp"
#include "rmfec/schedule.hpp"

namespace rmfec {

struct BenchConfig {
  CodeParams params;
  std::vector<std::size_t> packet_sizes{1500};
  double extra_pct = 5.0;  // received = k + ceil(extra_pct% of k)
  std::vector<Algorithm> algorithms{Algorithm::kFull, Algorithm::kMl};
  std::uint64_t seed = 1;
  double min_seconds = 0.05;  // per measurement, repeated until reached
};

struct BenchRow {
  Algorithm algorithm;
  std::size_t z = 0;
  OpCount decode_ops;
  OpCount extraction_ops;
  std::uint64_t search_evaluations = 0;
  double build_seconds = 0;    // blank phase, per block
  double replay_seconds = 0;   // payload ops incl. message extraction, per block
  double extract_seconds = 0;  // the message-extraction share of replay_seconds
  // Source (message) bits per second; all 0 when z = 0.
  double replay_mbps = 0;      // replay alone
  double throughput_mbps = 0;  // build + replay
  double throughput_excl_extraction_mbps = 0;
  double blank_share = 0;      // build / (build + replay)
};

struct BenchReport {
  ErasurePattern pattern;
  std::size_t received = 0;
  std::size_t pattern_trial = 0;  // arrival-order trial the pattern came from
  std::vector<BenchRow> rows;
};

// Picks the first seeded arrival order whose (k + extra)-prefix every listed
// algorithm decodes, then times each algorithm on it. Throws
// ContractViolation if no such pattern turns up within 10000 draws.
BenchReport run_bench(const BenchConfig& config);

std::string format_bench(const BenchConfig& config, const BenchReport& report);

}  // namespace rmfec
