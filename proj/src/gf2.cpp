#include "rmfec/gf2.hpp"

#include <algorithm>
#include <bit>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

constexpr std::uint64_t low_mask(std::size_t nbits) {
  return nbits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nbits) - 1;
}

// Masks selecting bit positions whose index has bit b clear.
constexpr std::uint64_t kSwapMasks[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

// out[j] = x[j ^ t] for t < 64.
std::uint64_t permute_in_word(std::uint64_t x, std::size_t t) {
  for (int b = 0; b < 6; ++b) {
    if ((t >> b) & 1u) {
      const unsigned s = 1u << b;
      x = ((x >> s) & kSwapMasks[b]) | ((x & kSwapMasks[b]) << s);
    }
  }
  return x;
}

void require_same_size(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) {
    throw ContractViolation("bit vector size mismatch: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

}  // namespace

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(words_for(size), value ? ~std::uint64_t{0} : 0) {
  trim();
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw ContractViolation("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVector BitVector::from_indices(std::size_t size, std::span<const std::size_t> indices) {
  BitVector v(size);
  for (std::size_t i : indices) {
    if (i >= size) throw ContractViolation("bit index out of range");
    v.set(i);
  }
  return v;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

void BitVector::set_all() {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  trim();
}

void BitVector::clear() { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitVector::find_next(std::size_t from) const {
  if (from >= size_) return npos;
  std::size_t wi = from >> 6;
  std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (w != 0) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
    if (++wi == words_.size()) return npos;
    w = words_[wi];
  }
}

std::vector<std::size_t> BitVector::set_indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    for (std::uint64_t w = words_[wi]; w != 0; w &= w - 1) {
      out.push_back((wi << 6) + static_cast<std::size_t>(std::countr_zero(w)));
    }
  }
  return out;
}

BitVector BitVector::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > size_) throw ContractViolation("slice out of range");
  BitVector out(length);
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    const std::size_t bit = offset + 64 * w;
    const std::size_t wi = bit >> 6;
    const unsigned sh = bit & 63;
    std::uint64_t val = words_[wi] >> sh;
    if (sh != 0 && wi + 1 < words_.size()) val |= words_[wi + 1] << (64 - sh);
    out.words_[w] = val;
  }
  out.trim();
  return out;
}

void BitVector::assign(std::size_t offset, const BitVector& src) {
  if (offset + src.size_ > size_) throw ContractViolation("assign out of range");
  for (std::size_t w = 0; w < src.words_.size(); ++w) {
    const std::size_t nbits = std::min<std::size_t>(64, src.size_ - 64 * w);
    const std::uint64_t mask = low_mask(nbits);
    const std::uint64_t value = src.words_[w] & mask;
    const std::size_t pos = offset + 64 * w;
    const std::size_t wi = pos >> 6;
    const unsigned sh = pos & 63;
    words_[wi] = (words_[wi] & ~(mask << sh)) | (value << sh);
    if (sh != 0 && sh + nbits > 64) {
      const std::uint64_t hi_mask = mask >> (64 - sh);
      words_[wi + 1] = (words_[wi + 1] & ~hi_mask) | (value >> (64 - sh));
    }
  }
}

BitVector BitVector::xor_permuted(std::size_t t) const {
  if (size_ == 0 || !std::has_single_bit(size_) || t >= size_) {
    throw ContractViolation("xor_permuted needs a power-of-two size and t < size");
  }
  BitVector out(size_);
  if (t == 0) {
    out.words_ = words_;
    return out;
  }
  const std::size_t word_xor = t >> 6;
  const std::size_t bit_xor = t & 63;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    out.words_[w] = permute_in_word(words_[w ^ word_xor], bit_xor);
  }
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

BitVector& BitVector::and_not(const BitVector& other) {
  require_same_size(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

BitVector BitVector::operator~() const {
  BitVector out(*this);
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

void BitVector::trim() {
  if (size_ & 63) words_.back() &= low_mask(size_ & 63);
}

BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

BitVector concat(const BitVector& head, const BitVector& tail) {
  BitVector out(head.size() + tail.size());
  out.assign(0, head);
  out.assign(head.size(), tail);
  return out;
}

bool dot(const BitVector& a, const BitVector& b) { return count_and(a, b) & 1u; }

std::size_t count_and(const BitVector& a, const BitVector& b) {
  require_same_size(a, b);
  std::size_t c = 0;
  const auto wa = a.words();
  const auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    c += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return c;
}

std::size_t count_and_xor_permuted(const BitVector& a, const BitVector& b, std::size_t t) {
  require_same_size(a, b);
  if (b.size() == 0 || !std::has_single_bit(b.size()) || t >= b.size()) {
    throw ContractViolation("count_and_xor_permuted needs a power-of-two size and t < size");
  }
  const auto wa = a.words();
  const auto wb = b.words();
  const std::size_t word_xor = t >> 6;
  const std::size_t bit_xor = t & 63;
  std::size_t c = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) {
    c += static_cast<std::size_t>(std::popcount(wa[w] & permute_in_word(wb[w ^ word_xor], bit_xor)));
  }
  return c;
}

// ---------------------------------------------------------------------------

Gf2Matrix::Gf2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * stride_, 0) {
  if (rows == 0 || cols == 0) throw ContractViolation("Gf2Matrix needs rows >= 1 and cols >= 1");
}

Gf2Matrix Gf2Matrix::identity(std::size_t n) {
  Gf2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Gf2Matrix Gf2Matrix::from_rows(std::span<const BitVector> rows) {
  if (rows.empty()) throw ContractViolation("from_rows needs at least one row");
  Gf2Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw ContractViolation("ragged rows");
    std::copy(rows[r].words().begin(), rows[r].words().end(), m.row_words(r).begin());
  }
  return m;
}

void Gf2Matrix::set(std::size_t r, std::size_t c, bool value) {
  auto& w = bits_[r * stride_ + (c >> 6)];
  const std::uint64_t bit = std::uint64_t{1} << (c & 63);
  w = value ? (w | bit) : (w & ~bit);
}

BitVector Gf2Matrix::row(std::size_t r) const {
  BitVector v(cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

BitVector Gf2Matrix::column(std::size_t c) const {
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (get(r, c)) v.set(r);
  }
  return v;
}

bool Gf2Matrix::row_is_zero(std::size_t r) const {
  auto w = row_words(r);
  return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
}

void Gf2Matrix::add_row(std::size_t src, std::size_t dst) {
  const std::uint64_t* s = bits_.data() + src * stride_;
  std::uint64_t* d = bits_.data() + dst * stride_;
  for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void Gf2Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   bits_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

Gf2Matrix Gf2Matrix::transpose() const {
  Gf2Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto w = row_words(r);
    for (std::size_t wi = 0; wi < w.size(); ++wi) {
      for (std::uint64_t x = w[wi]; x != 0; x &= x - 1) {
        t.set((wi << 6) + static_cast<std::size_t>(std::countr_zero(x)), r, true);
      }
    }
  }
  return t;
}

Gf2Matrix Gf2Matrix::select_columns(std::span<const std::size_t> columns) const {
  Gf2Matrix out(rows_, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= cols_) throw ContractViolation("column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) {
      if (get(r, columns[j])) out.set(r, j, true);
    }
  }
  return out;
}

BitVector mat_vec_mul(const Gf2Matrix& m, const BitVector& x) {
  if (x.size() != m.cols()) {
    throw ContractViolation("mat_vec_mul: vector has " + std::to_string(x.size()) +
                            " bits, matrix has " + std::to_string(m.cols()) + " columns");
  }
  BitVector y(m.rows());
  const auto xw = x.words();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto rw = m.row_words(r);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < rw.size(); ++i) acc ^= rw[i] & xw[i];
    if (std::popcount(acc) & 1) y.set(r);
  }
  return y;
}

BitVector vec_mat_mul(const BitVector& x, const Gf2Matrix& m) {
  if (x.size() != m.rows()) {
    throw ContractViolation("vec_mat_mul: vector has " + std::to_string(x.size()) +
                            " bits, matrix has " + std::to_string(m.rows()) + " rows");
  }
  BitVector y(m.cols());
  auto yw = y.words();
  for (std::size_t r = x.find_first(); r != BitVector::npos; r = x.find_next(r + 1)) {
    auto rw = m.row_words(r);
    for (std::size_t i = 0; i < rw.size(); ++i) yw[i] ^= rw[i];
  }
  return y;
}

RowOpLog ge_reduce(const Gf2Matrix& input) {
  Gf2Matrix m = input;
  RowOpLog log;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    const std::size_t wi = col >> 6;
    const std::uint64_t bit = std::uint64_t{1} << (col & 63);
    std::size_t pivot = row;
    while (pivot < m.rows() && !(m.row_words(pivot)[wi] & bit)) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      m.swap_rows(pivot, row);
      log.ops.push_back({RowOp::Kind::kSwapRows, static_cast<std::uint32_t>(pivot),
                         static_cast<std::uint32_t>(row)});
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != row && (m.row_words(r)[wi] & bit)) {
        m.add_row(row, r);
        log.ops.push_back(
            {RowOp::Kind::kAddRow, static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(r)});
      }
    }
    log.pivot_cols.push_back(col);
    ++row;
  }
  log.rank = row;
  return log;
}

void apply_row_ops(const RowOpLog& log, Gf2Matrix& m) {
  for (const RowOp& op : log.ops) {
    if (op.a >= m.rows() || op.b >= m.rows()) throw ContractViolation("row op out of range");
    if (op.kind == RowOp::Kind::kAddRow) {
      m.add_row(op.a, op.b);
    } else {
      m.swap_rows(op.a, op.b);
    }
  }
}

std::size_t rank(const Gf2Matrix& m) {
  Gf2Basis basis(m.cols());
  for (std::size_t r = 0; r < m.rows() && basis.rank() < m.cols(); ++r) basis.insert(m.row(r));
  return basis.rank();
}

Gf2Basis::Gf2Basis(std::size_t dimension) : dimension_(dimension), reduced_(dimension) {}

bool Gf2Basis::insert(const BitVector& v) {
  if (v.size() != dimension_) throw ContractViolation("Gf2Basis: dimension mismatch");
  BitVector x = v;
  for (std::size_t lead = x.find_first(); lead != BitVector::npos; lead = x.find_next(lead)) {
    if (reduced_[lead].empty()) {
      reduced_[lead] = std::move(x);
      ++rank_;
      return true;
    }
    x ^= reduced_[lead];
  }
  return false;
}

}  // namespace rmfec
