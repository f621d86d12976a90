#pragma once

// Helpers shared by the decoder tests: random patterns and blocks, and the
// reference decode of a whole packet block.

#include <algorithm>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "rmfec/blank_decoder.hpp"
#include "rmfec/packet_block.hpp"

namespace testing_support {

using namespace rmfec;

inline ErasurePattern random_pattern(std::mt19937_64& rng, std::size_t n, std::size_t known) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  return ErasurePattern::from_prefix(n, order, known);
}

inline ErasurePattern pattern_from_mask(std::size_t n, std::uint64_t mask) {
  BitVector b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, (mask >> i) & 1);
  return ErasurePattern(b);
}

inline oracle::Mask to_mask(const ErasurePattern& p) {
  oracle::Mask m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = p.is_known(i);
  return m;
}

inline oracle::Options reference_options(const DecodeOptions& o) {
  return {o.use_permutations, o.use_partial, o.max_sweeps, o.unpermuted_retry};
}

// Source payloads and the encoded block, using the oracle encoder per byte column.
struct Block {
  std::vector<Payload> source;
  std::vector<Payload> codeword;
};

inline Block random_block(std::mt19937_64& rng, const CodeParams& p, std::size_t z) {
  Block b;
  b.source.assign(p.k, Payload(z));
  for (auto& s : b.source)
    for (auto& x : s) x = static_cast<std::uint8_t>(rng());
  b.codeword.assign(p.n, Payload(z));
  for (std::size_t col = 0; col < z; ++col) {
    oracle::Bytes msg(p.k);
    for (std::size_t i = 0; i < p.k; ++i) msg[i] = b.source[i][col];
    const oracle::Bytes cw = oracle::encode(p.r, p.m, msg);
    for (std::size_t i = 0; i < p.n; ++i) b.codeword[i][col] = cw[i];
  }
  return b;
}

inline PacketBlock received_block(const CodeParams& p, std::size_t z, const Block& b, const ErasurePattern& pat) {
  PacketBlock blk = PacketBlock::erased(p, z);
  for (std::size_t i = 0; i < p.n; ++i)
    if (pat.is_known(i)) blk.slots[i] = b.codeword[i];
  return blk;
}

struct ReferenceResult {
  oracle::Mask known;
  std::vector<oracle::Bytes> columns;  // per byte column, n symbols
  bool success = false;
};

// Reference decode of every byte column: recursive reference, then (for
// ge_after_partial) dense ML on what is left, or dense ML alone for ge_only.
inline ReferenceResult reference_decode(const CodeParams& p, const DecodeOptions& opts, FallbackPolicy policy,
                                        const PacketBlock& blk) {
  ReferenceResult out;
  const oracle::RecursiveReference ref(reference_options(opts));
  const oracle::Mask received = to_mask(blk.pattern());
  out.known = received;
  for (std::size_t col = 0; col < blk.z; ++col) {
    oracle::Word w;
    w.known = received;
    w.val.assign(p.n, 0);
    for (std::size_t i = 0; i < p.n; ++i)
      if (blk.slots[i]) w.val[i] = (*blk.slots[i])[col];
    if (policy != FallbackPolicy::kGeOnly) ref.run(p.r, p.m, w);
    if (policy != FallbackPolicy::kNone && !w.complete()) {
      if (auto cw = oracle::ml_decode(p.r, p.m, w.val, w.known)) {
        w.val = *cw;
        w.known.assign(p.n, 1);
      }
    }
    out.known = w.known;
    out.columns.push_back(w.val);
  }
  if (blk.z == 0) {
    // Pattern-only: run once on a dummy column.
    oracle::Word w{oracle::Bytes(p.n, 0), received};
    if (policy != FallbackPolicy::kGeOnly) ref.run(p.r, p.m, w);
    if (policy != FallbackPolicy::kNone && !w.complete() && oracle::ml_decode(p.r, p.m, w.val, w.known))
      w.known.assign(p.n, 1);
    out.known = w.known;
  }
  out.success = std::all_of(out.known.begin(), out.known.end(), [](char c) { return c != 0; });
  return out;
}

}  // namespace testing_support
