#pragma once

// Monte Carlo packet-erasure experiments. Each trial draws a uniformly random
// arrival order of the n packets and records how many arrivals the decoder
// needs before the block decodes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmfec/blank_decoder.hpp"
#include "rmfec/rm_code.hpp"

namespace rmfec {

enum class Algorithm { kClassical, kPermOnly, kPartialOnly, kFull, kFullGeHybrid, kMl };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kClassical,   Algorithm::kPermOnly,
                                               Algorithm::kPartialOnly, Algorithm::kFull,
                                               Algorithm::kFullGeHybrid, Algorithm::kMl};

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct DecoderConfig {
  DecodeOptions opts;
  FallbackPolicy policy = FallbackPolicy::kNone;
};
DecoderConfig decoder_config(Algorithm a, int max_sweeps = 4);

// Returned by needed_symbols when even the full block does not decode.
inline std::size_t undecodable(const CodeParams& p) { return p.n + 1; }

// Smallest N such that the first N arrivals decode; linear scan from N = k.
class NeededSymbols {
 public:
  NeededSymbols(const CodeParams& params, Algorithm algorithm, int max_sweeps = 4);

  std::size_t operator()(std::span<const std::size_t> arrival_order) const;

 private:
  CodeParams params_;
  Algorithm algorithm_;
  BlankDecoder decoder_;
  std::vector<BitVector> generator_columns_;
};

std::size_t needed_symbols(const CodeParams& params, Algorithm algorithm,
                           std::span<const std::size_t> arrival_order);

// Arrival order of trial `trial`: Fisher-Yates driven by a 64-bit generator
// seeded from seed ^ trial.
std::vector<std::size_t> arrival_order(std::size_t n, std::uint64_t seed, std::uint64_t trial);

struct TrialConfig {
  CodeParams params;
  Algorithm algorithm = Algorithm::kFull;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t max_extra = 0;
  unsigned threads = 1;
  int max_sweeps = 4;
};

struct OverheadStats {
  double mean_overhead_pct = 0.0;  // mean (N - k) / k, in percent
  double mean_extra = 0.0;         // mean N - k, in symbols
  std::vector<std::pair<std::size_t, double>> failure_rates;  // (e, P[N > k + e])
  std::size_t trials = 0;
  std::vector<std::size_t> needed;  // per trial, in trial order
};

// Throws ContractViolation when trials == 0 or max_extra > n - k.
OverheadStats run_curve(const TrialConfig& config);

// Header "code,algorithm,extra,failure_rate,trials,seed", one row per e,
// then an overhead_pct summary row.
std::string curve_csv(const TrialConfig& config, const OverheadStats& stats);

}  // namespace rmfec
