#pragma once

// Blank decoding of a packet block: decode the loss pattern once (recursive
// first, Gaussian elimination when allowed) and record the schedule that the
// payload replay follows.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "rmfec/erasure_pattern.hpp"
#include "rmfec/gf2.hpp"
#include "rmfec/recursive_decoder.hpp"
#include "rmfec/rm_code.hpp"
#include "rmfec/schedule.hpp"

namespace rmfec {

enum class FallbackPolicy {
  kNone,            // recursive decoding only
  kGeAfterPartial,  // recursive, then elimination on whatever is still erased
  kGeOnly,          // elimination on the received positions, no recursion
};

std::string_view policy_name(FallbackPolicy policy);
std::optional<FallbackPolicy> parse_policy(std::string_view name);

class BlankDecoder {
 public:
  BlankDecoder(const CodeParams& params, const DecodeOptions& opts, FallbackPolicy policy);

  const CodeParams& params() const { return params_; }
  const DecodeOptions& options() const { return opts_; }
  FallbackPolicy policy() const { return policy_; }

  Schedule build(const ErasurePattern& pattern) const;

  // Same success criterion as build(pattern).success without recording ops.
  bool decodable(const ErasurePattern& pattern) const;

 private:
  bool residual_solvable(const ErasurePattern& known) const;
  bool residual_solve(ScheduleBuilder& builder, const ErasurePattern& known) const;

  CodeParams params_;
  DecodeOptions opts_;
  FallbackPolicy policy_;
  Gf2Matrix generator_;
  std::vector<BitVector> generator_columns_;
  std::optional<Gf2Matrix> parity_;
  std::vector<BitVector> parity_columns_;
};

Schedule build_schedule(const ErasurePattern& pattern, const CodeParams& params,
                        const DecodeOptions& opts, FallbackPolicy policy);

// Appends ops computing the message of a fully known codeword held in
// entries [0, n); returns the message slots.
std::vector<std::uint32_t> append_message_extraction(ScheduleBuilder& builder,
                                                     const CodeParams& params);

}  // namespace rmfec
