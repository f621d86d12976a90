#pragma once

// Recursive Plotkin erasure decoding driven by the erasure pattern alone.
//
// A level of length n splits the word into (u | u ^ v). The right half may
// first be re-indexed by an XOR offset t (j -> j ^ t), which is the code
// automorphism x -> Ax with A equal to the identity except for its last
// column. v is decoded first, then u, and recovered symbols are pushed across
// the halves. With partial passing enabled, failed branches still hand their
// recovered symbols upward and the level sweeps until nothing new appears.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rmfec/erasure_pattern.hpp"
#include "rmfec/rm_code.hpp"
#include "rmfec/schedule.hpp"

namespace rmfec {

// Right-half re-indexing j -> j ^ t, t < n/2. Self-inverse.
struct XorMask {
  std::size_t t = 0;

  std::size_t apply(std::size_t j) const { return j ^ t; }
  bool operator==(const XorMask&) const = default;
};

struct DecodeOptions {
  bool use_permutations = true;
  bool use_partial = true;
  int max_sweeps = 4;
  // With permutations and partial passing: an incomplete decode is redone
  // without permutations, and that result is kept if it completes. Makes the
  // success set contain partial_only's (hence classical's) on every pattern.
  bool unpermuted_retry = true;

  static DecodeOptions classical() { return {false, false, 4, false}; }
  static DecodeOptions permutation_only() { return {true, false, 4, false}; }
  static DecodeOptions partial_only() { return {false, true, 4, false}; }
  static DecodeOptions full() { return {true, true, 4, true}; }
};

// |{ j : left[j] and right[j ^ t] }| -- how many v positions are computable.
std::size_t count_known_v(const BitVector& left, const BitVector& right, std::size_t t);

struct MaskChoice {
  XorMask mask;
  std::size_t count = 0;
  // Position pairs examined; the full scan costs (n/2)^2.
  std::uint64_t evaluations = 0;
};

// Scans every t in [0, n/2) and keeps the smallest maximizer of count_known_v.
MaskChoice select_xor_mask(const BitVector& left, const BitVector& right);

struct RecursiveStats {
  std::uint64_t search_evaluations = 0;
  std::uint64_t mask_selections = 0;
};

// Walks the pattern and returns the grown known-mask. When `sink` is non-null
// every recovery is recorded on it; pass nullptr for a pattern-only run.
ErasurePattern blank_decode_rm(const ErasurePattern& pattern, const CodeParams& params,
                               const DecodeOptions& opts, ScheduleBuilder* sink,
                               RecursiveStats* stats = nullptr);

struct WordDecodeResult {
  bool success = false;
  // Codeword symbols; positions not in `known` hold 0.
  std::vector<std::uint8_t> symbols;
  ErasurePattern known;
};

// Records a schedule for `pattern` and replays it over one symbol per position.
WordDecodeResult decode_word(std::span<const std::uint8_t> received, const ErasurePattern& pattern,
                             const CodeParams& params, const DecodeOptions& opts);

}  // namespace rmfec
