#pragma once

// Maximum-likelihood erasure decoding by Gaussian elimination, in blank form:
// the elimination runs once on the pattern and the resulting matrix-vector
// products are emitted as a schedule.

#include <cstddef>
#include <optional>

#include "rmfec/erasure_pattern.hpp"
#include "rmfec/gf2.hpp"
#include "rmfec/schedule.hpp"

namespace rmfec {

struct MlDecodeResult {
  // Present iff the received columns of G have rank k.
  std::optional<Schedule> schedule;
  std::size_t rank = 0;

  bool ok() const { return schedule.has_value(); }
};

// G is k x n. On success the schedule writes message bit i into
// message_slots[i] and re-encodes every erased codeword position from them.
MlDecodeResult ml_blank_decode(const Gf2Matrix& g, const ErasurePattern& pattern);

}  // namespace rmfec
