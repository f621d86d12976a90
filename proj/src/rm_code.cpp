#include "rmfec/rm_code.hpp"

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

// Encodes message bits [offset, offset + k(r,m)) into out[pos, pos + 2^m).
void encode_into(const BitVector& message, std::size_t offset, int r, int m, BitVector& out,
                 std::size_t pos) {
  const std::size_t n = std::size_t{1} << m;
  if (r == 0) {
    if (message.test(offset)) {
      for (std::size_t i = 0; i < n; ++i) out.set(pos + i);
    }
    return;
  }
  if (r >= m) {
    for (std::size_t i = 0; i < n; ++i) out.set(pos + i, message.test(offset + i));
    return;
  }
  const std::size_t half = n / 2;
  const std::size_t ku = rm_dimension(r, m - 1);
  encode_into(message, offset, r, m - 1, out, pos);
  encode_into(message, offset + ku, r - 1, m - 1, out, pos + half);
  // right half currently holds v; make it u ^ v
  for (std::size_t i = 0; i < half; ++i) {
    if (out.test(pos + i)) out.flip(pos + half + i);
  }
}

void decode_into(const BitVector& codeword, int r, int m, BitVector& message,
                 std::size_t offset) {
  const std::size_t n = codeword.size();
  if (r == 0) {
    message.set(offset, codeword.test(0));
    return;
  }
  if (r >= m) {
    message.assign(offset, codeword);
    return;
  }
  const std::size_t half = n / 2;
  const BitVector u = codeword.slice(0, half);
  const BitVector v = u ^ codeword.slice(half, half);
  decode_into(u, r, m - 1, message, offset);
  decode_into(v, r - 1, m - 1, message, offset + rm_dimension(r, m - 1));
}

}  // namespace

std::string CodeParams::name() const {
  return "RM(" + std::to_string(r) + "," + std::to_string(m) + ")";
}

std::size_t rm_dimension(int r, int m) {
  if (r < 0) return 0;
  if (r >= m) return std::size_t{1} << m;
  std::size_t sum = 0;
  std::size_t binom = 1;
  for (int i = 0; i <= r; ++i) {
    if (i > 0) binom = binom * static_cast<std::size_t>(m - i + 1) / static_cast<std::size_t>(i);
    sum += binom;
  }
  return sum;
}

CodeParams code_params(int r, int m) {
  if (m < 1 || m > kMaxLogLength) {
    throw ParameterError("m must be in [1, " + std::to_string(kMaxLogLength) + "], got " +
                         std::to_string(m));
  }
  if (r < 0 || r > m) {
    throw ParameterError("r must be in [0, m], got r=" + std::to_string(r) +
                         " m=" + std::to_string(m));
  }
  return CodeParams{r, m, rm_dimension(r, m), std::size_t{1} << m};
}

BitVector plotkin_encode(const BitVector& message, const CodeParams& params) {
  if (message.size() != params.k) {
    throw ContractViolation(params.name() + " encode: message has " +
                            std::to_string(message.size()) + " bits, expected " +
                            std::to_string(params.k));
  }
  BitVector out(params.n);
  encode_into(message, 0, params.r, params.m, out, 0);
  return out;
}

BitVector codeword_to_message(const BitVector& codeword, const CodeParams& params) {
  if (codeword.size() != params.n) {
    throw ContractViolation(params.name() + ": codeword has " + std::to_string(codeword.size()) +
                            " bits, expected " + std::to_string(params.n));
  }
  BitVector message(params.k);
  decode_into(codeword, params.r, params.m, message, 0);
  return message;
}

Gf2Matrix generator_matrix(const CodeParams& params) {
  Gf2Matrix g(params.k, params.n);
  BitVector unit(params.k);
  for (std::size_t i = 0; i < params.k; ++i) {
    unit.set(i);
    const BitVector row = plotkin_encode(unit, params);
    std::copy(row.words().begin(), row.words().end(), g.row_words(i).begin());
    unit.reset(i);
  }
  return g;
}

std::optional<Gf2Matrix> parity_check_matrix(const CodeParams& params) {
  if (params.r == params.m) return std::nullopt;
  return generator_matrix(code_params(params.m - params.r - 1, params.m));
}

}  // namespace rmfec
