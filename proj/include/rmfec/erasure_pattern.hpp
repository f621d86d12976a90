#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rmfec/gf2.hpp"

namespace rmfec {

// Received/erased mask over the n positions of a block. known[i] = 1 means
// symbol i was received (or has been recovered).
struct ErasurePattern {
  BitVector known;

  ErasurePattern() = default;
  explicit ErasurePattern(BitVector mask) : known(std::move(mask)) {}

  static ErasurePattern all_known(std::size_t n) { return ErasurePattern(BitVector(n, true)); }
  static ErasurePattern none_known(std::size_t n) { return ErasurePattern(BitVector(n)); }
  static ErasurePattern from_known(std::size_t n, std::span<const std::size_t> positions) {
    return ErasurePattern(BitVector::from_indices(n, positions));
  }
  // First `count` entries of an arrival order are received.
  static ErasurePattern from_prefix(std::size_t n, std::span<const std::size_t> order,
                                    std::size_t count) {
    return ErasurePattern(BitVector::from_indices(n, order.first(count)));
  }

  std::size_t size() const { return known.size(); }
  bool is_known(std::size_t i) const { return known.test(i); }
  std::size_t known_count() const { return known.count(); }
  std::size_t erased_count() const { return size() - known_count(); }
  bool complete() const { return known.all(); }
  std::vector<std::size_t> known_positions() const { return known.set_indices(); }
  std::vector<std::size_t> erased_positions() const { return (~known).set_indices(); }

  bool operator==(const ErasurePattern&) const = default;
};

}  // namespace rmfec
