#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "rmfec/gf2.hpp"

namespace rmfec {

inline constexpr int kMaxLogLength = 16;

// Identity of RM(r, m): length n = 2^m, dimension k = sum_{i<=r} C(m, i).
struct CodeParams {
  int r = 0;
  int m = 1;
  std::size_t k = 1;
  std::size_t n = 2;

  std::string name() const;  // "RM(r,m)"
  bool operator==(const CodeParams&) const = default;
};

// Dimension of RM(r, m); 0 when r < 0 (the zero code), 2^m when r >= m.
std::size_t rm_dimension(int r, int m);

// Throws ParameterError unless 0 <= r <= m and 1 <= m <= 16.
CodeParams code_params(int r, int m);

// Plotkin encoding. The message is laid out as (m_u | m_v) at every level,
// where m_u encodes u in RM(r, m-1) and m_v encodes v in RM(r-1, m-1); the
// codeword is (u | u ^ v). Position i's left/right half is its top bit.
BitVector plotkin_encode(const BitVector& message, const CodeParams& params);

// Inverse of plotkin_encode on a valid, fully known codeword.
BitVector codeword_to_message(const BitVector& codeword, const CodeParams& params);

// k x n; row i is plotkin_encode(e_i).
Gf2Matrix generator_matrix(const CodeParams& params);

// (n - k) x n generator of the dual code RM(m - r - 1, m), or nullopt when
// the code is the full space (r = m).
std::optional<Gf2Matrix> parity_check_matrix(const CodeParams& params);

}  // namespace rmfec
