#pragma once

// Bit-packed GF(2) vectors and matrices.
//
// Packing convention: bit i lives in word i / 64 at bit position i % 64
// (least significant bit = lowest index). Bits past size() are always zero.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rmfec {

class BitVector {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false);

  // "1011" -> bits {0, 2, 3}; character 0 is index 0.
  static BitVector from_string(std::string_view bits);
  static BitVector from_indices(std::size_t size, std::span<const std::size_t> indices);
  std::string to_string() const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return test(i); }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void set(std::size_t i, bool value) {
    if (value) set(i); else reset(i);
  }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void set_all();
  void clear();

  std::size_t count() const;
  bool all() const { return count() == size_; }
  bool none() const;
  bool any() const { return !none(); }

  // First set bit at or after `from`, or npos.
  std::size_t find_next(std::size_t from) const;
  std::size_t find_first() const { return find_next(0); }
  std::vector<std::size_t> set_indices() const;

  BitVector slice(std::size_t offset, std::size_t length) const;
  // Overwrites bits [offset, offset + src.size()).
  void assign(std::size_t offset, const BitVector& src);

  // result[j] = (*this)[j ^ t]. size() must be a power of two and t < size().
  BitVector xor_permuted(std::size_t t) const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);
  // this &= ~other
  BitVector& and_not(const BitVector& other);
  BitVector operator~() const;

  bool operator==(const BitVector& other) const = default;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

 private:
  void trim();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

BitVector operator^(BitVector a, const BitVector& b);
BitVector operator&(BitVector a, const BitVector& b);
BitVector operator|(BitVector a, const BitVector& b);
BitVector concat(const BitVector& head, const BitVector& tail);
// Parity of popcount(a & b); sizes must match.
bool dot(const BitVector& a, const BitVector& b);
// popcount(a & b) without materializing the intersection.
std::size_t count_and(const BitVector& a, const BitVector& b);
// popcount(a & b.xor_permuted(t)) without allocating.
std::size_t count_and_xor_permuted(const BitVector& a, const BitVector& b, std::size_t t);

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  // rows >= 1 and cols >= 1.
  Gf2Matrix(std::size_t rows, std::size_t cols);

  static Gf2Matrix identity(std::size_t n);
  static Gf2Matrix from_rows(std::span<const BitVector> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t stride() const { return stride_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * stride_ + (c >> 6)] >> (c & 63)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool value);

  std::span<std::uint64_t> row_words(std::size_t r) {
    return {bits_.data() + r * stride_, stride_};
  }
  std::span<const std::uint64_t> row_words(std::size_t r) const {
    return {bits_.data() + r * stride_, stride_};
  }
  BitVector row(std::size_t r) const;
  BitVector column(std::size_t c) const;
  bool row_is_zero(std::size_t r) const;

  // row[dst] ^= row[src]
  void add_row(std::size_t src, std::size_t dst);
  void swap_rows(std::size_t a, std::size_t b);

  Gf2Matrix transpose() const;
  // Keeps the listed columns, in the listed order.
  Gf2Matrix select_columns(std::span<const std::size_t> columns) const;

  bool operator==(const Gf2Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> bits_;
};

BitVector mat_vec_mul(const Gf2Matrix& m, const BitVector& x);
// Row vector times matrix: x has m.rows() bits, result has m.cols() bits.
BitVector vec_mat_mul(const BitVector& x, const Gf2Matrix& m);

struct RowOp {
  enum class Kind : std::uint8_t { kAddRow, kSwapRows };
  Kind kind;
  // kAddRow: row[b] ^= row[a]. kSwapRows: exchange rows a and b.
  std::uint32_t a;
  std::uint32_t b;

  bool operator==(const RowOp&) const = default;
};

struct RowOpLog {
  std::vector<RowOp> ops;
  // pivot_cols[i] is the pivot column of row i after replay.
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;

  bool operator==(const RowOpLog&) const = default;
};

// Gauss-Jordan elimination. Pivot = leftmost column with a nonzero entry in
// the unreduced rows, taken from the topmost such row. The input is not
// modified; replaying the log on it gives reduced row-echelon form.
RowOpLog ge_reduce(const Gf2Matrix& m);
void apply_row_ops(const RowOpLog& log, Gf2Matrix& m);
std::size_t rank(const Gf2Matrix& m);

// Online elimination basis: insert vectors one at a time and track rank.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t dimension);

  // True when v was independent of everything inserted so far.
  bool insert(const BitVector& v);
  std::size_t rank() const { return rank_; }
  std::size_t dimension() const { return dimension_; }

 private:
  std::size_t dimension_;
  std::size_t rank_ = 0;
  // reduced_[b] has leading (lowest) set bit b, or is empty.
  std::vector<BitVector> reduced_;
};

}  // namespace rmfec
