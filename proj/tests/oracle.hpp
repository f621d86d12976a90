#pragma once

// Reference implementations used as test oracles. Deliberately naive: byte
// vectors instead of packed words, dense elimination, and a decoder that acts
// on symbol values directly rather than recording a schedule.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Bytes = std::vector<std::uint8_t>;
using Mask = std::vector<char>;  // 1 = known
using Dense = std::vector<Bytes>;  // rows of 0/1 entries

inline std::size_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return c;
}

inline std::size_t dimension(int r, int m) {
  std::size_t k = 0;
  for (int i = 0; i <= r && i <= m; ++i) k += binom(m, i);
  return k;
}

// (u | u ^ v); message = (message of u | message of v).
inline Bytes encode(int r, int m, const Bytes& msg) {
  const std::size_t n = std::size_t{1} << m;
  if (r == 0) return Bytes(n, msg.at(0));
  if (r >= m) return msg;
  const std::size_t ku = dimension(r, m - 1);
  const Bytes u = encode(r, m - 1, Bytes(msg.begin(), msg.begin() + static_cast<std::ptrdiff_t>(ku)));
  const Bytes v = encode(r - 1, m - 1, Bytes(msg.begin() + static_cast<std::ptrdiff_t>(ku), msg.end()));
  Bytes out = u;
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(u[i] ^ v[i]);
  return out;
}

inline Bytes extract(int r, int m, const Bytes& word) {
  if (r == 0) return Bytes{word.at(0)};
  if (r >= m) return word;
  const std::size_t half = word.size() / 2;
  Bytes u(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(half));
  Bytes v(half);
  for (std::size_t i = 0; i < half; ++i) v[i] = word[i] ^ word[half + i];
  Bytes msg = extract(r, m - 1, u);
  const Bytes mv = extract(r - 1, m - 1, v);
  msg.insert(msg.end(), mv.begin(), mv.end());
  return msg;
}

// Evaluations of all monomials of degree <= r in m variables, one variable per
// index bit. Spans the same code as the Plotkin basis.
inline Dense monomial_generator(int r, int m) {
  const std::size_t n = std::size_t{1} << m;
  Dense rows;
  for (std::size_t mono = 0; mono < (std::size_t{1} << m); ++mono) {
    if (__builtin_popcountll(mono) > r) continue;
    Bytes row(n);
    for (std::size_t x = 0; x < n; ++x) row[x] = (x & mono) == mono;
    rows.push_back(row);
  }
  return rows;
}

inline Dense plotkin_generator(int r, int m) {
  const std::size_t k = dimension(r, m);
  Dense rows;
  for (std::size_t i = 0; i < k; ++i) {
    Bytes e(k);
    e[i] = 1;
    rows.push_back(encode(r, m, e));
  }
  return rows;
}

inline std::size_t dense_rank(Dense rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && rows[i][c]) {
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] ^= rows[rank][j];
      }
    }
    ++rank;
  }
  return rank;
}

// Maximum-likelihood decode of a byte word (8 parallel binary codewords):
// solves G_K^T msg = word_K by dense elimination. nullopt when rank < k.
inline std::optional<Bytes> ml_decode(int r, int m, const Bytes& word, const Mask& known) {
  const Dense g = plotkin_generator(r, m);
  const std::size_t k = g.size();
  // One equation per known position: sum_i g[i][p] msg_i = word[p].
  Dense eq;
  Bytes rhs;
  for (std::size_t p = 0; p < word.size(); ++p) {
    if (!known[p]) continue;
    Bytes row(k);
    for (std::size_t i = 0; i < k; ++i) row[i] = g[i][p];
    eq.push_back(row);
    rhs.push_back(word[p]);
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_row(k, SIZE_MAX);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = rank;
    while (p < eq.size() && !eq[p][c]) ++p;
    if (p == eq.size()) return std::nullopt;
    std::swap(eq[p], eq[rank]);
    std::swap(rhs[p], rhs[rank]);
    for (std::size_t i = 0; i < eq.size(); ++i) {
      if (i != rank && eq[i][c]) {
        for (std::size_t j = 0; j < k; ++j) eq[i][j] ^= eq[rank][j];
        rhs[i] ^= rhs[rank];
      }
    }
    pivot_row[c] = rank++;
  }
  Bytes msg(k);
  for (std::size_t c = 0; c < k; ++c) msg[c] = rhs[pivot_row[c]];
  return encode(r, m, msg);
}

struct Options {
  bool perm = true;
  bool partial = true;
  int max_sweeps = 4;
  bool unpermuted_retry = false;
};

struct Word {
  Bytes val;
  Mask known;

  std::size_t known_count() const {
    std::size_t c = 0;
    for (char b : known) c += b != 0;
    return c;
  }
  bool complete() const { return known_count() == known.size(); }
};

// Value-domain recursive erasure decoder following the same control flow as
// the schedule-recording one.
class RecursiveReference {
 public:
  explicit RecursiveReference(Options opts) : opts_(opts) {}

  // Whole-word decode, including the unpermuted retry.
  void run(int r, int m, Word& w) const {
    Word first = w;
    decode(r, m, first);
    if (first.complete() || !(opts_.unpermuted_retry && opts_.perm && opts_.partial)) {
      w = std::move(first);
      return;
    }
    Options plain = opts_;
    plain.perm = false;
    RecursiveReference(plain).decode(r, m, w);
    if (!w.complete()) w = std::move(first);
  }

  void decode(int r, int m, Word& w) const {
    const std::size_t n = w.val.size();
    const std::size_t known = w.known_count();
    if (known == n || known == 0) return;
    if (r == 0) {
      std::size_t src = 0;
      while (!w.known[src]) ++src;
      for (std::size_t i = 0; i < n; ++i) {
        w.val[i] = w.val[src];
        w.known[i] = 1;
      }
      return;
    }
    if (r >= m) return;
    if (r == m - 1) {
      if (known != n - 1) return;
      std::uint8_t acc = 0;
      std::size_t hole = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (w.known[i]) acc ^= w.val[i];
        else hole = i;
      }
      w.val[hole] = acc;
      w.known[hole] = 1;
      return;
    }
    if (opts_.partial) partial(r, m, w);
    else strict(r, m, w);
  }

  static std::size_t select(const Word& w) {
    const std::size_t half = w.val.size() / 2;
    std::size_t best_t = 0, best = 0;
    for (std::size_t t = 0; t < half; ++t) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < half; ++j) c += w.known[j] && w.known[half + (j ^ t)];
      if (t == 0 || c > best) {
        best = c;
        best_t = t;
      }
    }
    return best_t;
  }

 private:
  void strict(int r, int m, Word& w) const {
    const std::size_t chosen = opts_.perm ? select(w) : 0;
    for (std::size_t t : {chosen, std::size_t{0}}) {
      Word trial = w;
      if (sweep(r, m, trial, t, true)) {
        w = std::move(trial);
        return;
      }
      if (t == 0) break;
    }
  }

  void partial(int r, int m, Word& w) const {
    for (int s = 0; s < opts_.max_sweeps; ++s) {
      const std::size_t t = opts_.perm ? select(w) : 0;
      Word next = w;
      sweep(r, m, next, t, false);
      if (next.known == w.known) return;
      w = std::move(next);
      if (w.complete()) return;
    }
  }

  bool sweep(int r, int m, Word& w, std::size_t t, bool strict) const {
    const std::size_t half = w.val.size() / 2;
    Word left, right, v;
    for (std::size_t j = 0; j < half; ++j) {
      left.val.push_back(w.val[j]);
      left.known.push_back(w.known[j]);
      right.val.push_back(w.val[half + (j ^ t)]);
      right.known.push_back(w.known[half + (j ^ t)]);
      const bool both = left.known[j] && right.known[j];
      v.val.push_back(both ? left.val[j] ^ right.val[j] : 0);
      v.known.push_back(both);
    }
    const Mask v_before = v.known;
    decode(r - 1, m - 1, v);
    if (strict && !v.complete()) return false;
    for (std::size_t j = 0; j < half; ++j) {
      if (!v.known[j] || v_before[j]) continue;
      if (left.known[j] && !right.known[j]) {
        right.val[j] = left.val[j] ^ v.val[j];
        right.known[j] = 1;
      } else if (!left.known[j] && right.known[j]) {
        left.val[j] = right.val[j] ^ v.val[j];
        left.known[j] = 1;
      }
    }
    const Mask u_before = left.known;
    decode(r, m - 1, left);
    if (strict && !left.complete()) return false;
    for (std::size_t j = 0; j < half; ++j) {
      if (left.known[j] && !u_before[j] && !right.known[j] && v.known[j]) {
        right.val[j] = left.val[j] ^ v.val[j];
        right.known[j] = 1;
      }
    }
    for (std::size_t j = 0; j < half; ++j) {
      w.val[j] = left.val[j];
      w.known[j] = left.known[j];
      w.val[half + (j ^ t)] = right.val[j];
      w.known[half + (j ^ t)] = right.known[j];
    }
    return true;
  }

  Options opts_;
};

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t len) {
  Bytes b(len);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

}  // namespace oracle
