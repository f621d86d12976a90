#include "rmfec/recursive_decoder.hpp"

#include <optional>
#include <stdexcept>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

using EntryId = ScheduleBuilder::EntryId;
using View = std::span<const EntryId>;

class Engine {
 public:
  Engine(const DecodeOptions& opts, ScheduleBuilder* sink, RecursiveStats* stats)
      : opts_(opts), sink_(sink), stats_(stats) {}

  BitVector decode(int r, int m, const BitVector& known, View view) {
    if (known.all() || known.none()) return known;
    if (r == 0) return decode_repetition(known, view);
    if (r >= m) return known;
    if (r == m - 1) return decode_parity(known, view);
    return opts_.use_partial ? decode_partial(r, m, known, view) : decode_strict(r, m, known, view);
  }

 private:
  BitVector decode_repetition(const BitVector& known, View view) {
    if (sink_) {
      const EntryId src = view[known.find_first()];
      sink_->materialize(src);
      for (std::size_t i = 0; i < known.size(); ++i) {
        if (!known.test(i)) sink_->write(view[i], {src});
      }
    }
    return BitVector(known.size(), true);
  }

  BitVector decode_parity(const BitVector& known, View view) {
    if (known.count() + 1 != known.size()) return known;
    if (sink_) {
      const std::size_t hole = (~known).find_first();
      std::vector<EntryId> sources;
      sources.reserve(known.size() - 1);
      for (std::size_t i = 0; i < known.size(); ++i) {
        if (i != hole) sources.push_back(view[i]);
      }
      sink_->write(view[hole], sources);
    }
    return BitVector(known.size(), true);
  }

  std::size_t select(const BitVector& known) {
    const std::size_t half = known.size() / 2;
    const MaskChoice choice = select_xor_mask(known.slice(0, half), known.slice(half, half));
    if (stats_) {
      stats_->search_evaluations += choice.evaluations;
      ++stats_->mask_selections;
    }
    return choice.mask.t;
  }

  // No partial passing: a level either completes or leaves the pattern as it
  // found it. With permutations, the selected mask is tried first and the
  // identity second.
  BitVector decode_strict(int r, int m, const BitVector& known, View view) {
    const std::size_t chosen = opts_.use_permutations ? select(known) : 0;
    for (std::size_t t : {chosen, std::size_t{0}}) {
      std::optional<ScheduleBuilder::Checkpoint> cp;
      if (sink_) cp = sink_->checkpoint();
      if (auto out = sweep(r, m, known, view, t, /*strict=*/true)) return *std::move(out);
      if (sink_) sink_->rollback(*cp);
      if (t == 0) break;
    }
    return known;
  }

  // Partial passing: sweep until a fixpoint or the sweep cap. With
  // permutations the mask is re-selected every sweep.
  BitVector decode_partial(int r, int m, const BitVector& known, View view) {
    BitVector cur = known;
    for (int s = 0; s < opts_.max_sweeps; ++s) {
      const std::size_t t = opts_.use_permutations ? select(cur) : 0;
      std::optional<ScheduleBuilder::Checkpoint> cp;
      if (sink_) cp = sink_->checkpoint();
      BitVector next = *sweep(r, m, cur, view, t, /*strict=*/false);
      if (next == cur) {
        if (sink_) sink_->rollback(*cp);
        break;
      }
      cur = std::move(next);
      if (cur.all()) break;
    }
    return cur;
  }

  // One pass over a level: v = left ^ right[. ^ t] first, then u = left.
  // Returns nullopt in strict mode when either sub-decode is incomplete.
  std::optional<BitVector> sweep(int r, int m, const BitVector& known, View view, std::size_t t,
                                 bool strict) {
    const std::size_t half = known.size() / 2;
    BitVector left = known.slice(0, half);
    // right_p[j] = right[j ^ t]
    BitVector right_p = known.slice(half, half).xor_permuted(t);
    const BitVector v_known = left & right_p;

    std::vector<EntryId> v_view;
    auto right_entry = [&](std::size_t j) { return view[half + (j ^ t)]; };
    if (sink_) {
      v_view.resize(half);
      for (std::size_t j = 0; j < half; ++j) {
        v_view[j] = v_known.test(j) ? sink_->add_sum(view[j], right_entry(j)) : sink_->add_unknown();
      }
    }

    const BitVector v_out = decode(r - 1, m - 1, v_known, v_view);
    if (strict && !v_out.all()) return std::nullopt;

    BitVector v_new = v_out;
    v_new.and_not(v_known);
    for (std::size_t j = v_new.find_first(); j != BitVector::npos; j = v_new.find_next(j + 1)) {
      if (left.test(j) && !right_p.test(j)) {
        if (sink_) sink_->write(right_entry(j), {view[j], v_view[j]});
        right_p.set(j);
      } else if (!left.test(j) && right_p.test(j)) {
        if (sink_) sink_->write(view[j], {right_entry(j), v_view[j]});
        left.set(j);
      }
    }

    const BitVector u_out = decode(r, m - 1, left, sink_ ? view.first(half) : View{});
    if (strict && !u_out.all()) return std::nullopt;

    BitVector u_new = u_out;
    u_new.and_not(left);
    for (std::size_t j = u_new.find_first(); j != BitVector::npos; j = u_new.find_next(j + 1)) {
      if (!right_p.test(j) && v_out.test(j)) {
        if (sink_) sink_->write(right_entry(j), {view[j], v_view[j]});
        right_p.set(j);
      }
    }
    return concat(u_out, right_p.xor_permuted(t));
  }

  const DecodeOptions& opts_;
  ScheduleBuilder* sink_;
  RecursiveStats* stats_;
};

}  // namespace

std::size_t count_known_v(const BitVector& left, const BitVector& right, std::size_t t) {
  return count_and_xor_permuted(left, right, t);
}

MaskChoice select_xor_mask(const BitVector& left, const BitVector& right) {
  if (left.size() != right.size()) throw ContractViolation("select_xor_mask: half sizes differ");
  MaskChoice best;
  const std::size_t half = left.size();
  // No offset can pair up more positions than either half has known.
  const std::size_t bound = std::min(left.count(), right.count());
  for (std::size_t t = 0; t < half; ++t) {
    const std::size_t c = count_known_v(left, right, t);
    best.evaluations += half;
    if (t == 0 || c > best.count) {
      best.mask.t = t;
      best.count = c;
      if (c == bound) break;
    }
  }
  return best;
}

ErasurePattern blank_decode_rm(const ErasurePattern& pattern, const CodeParams& params,
                               const DecodeOptions& opts, ScheduleBuilder* sink,
                               RecursiveStats* stats) {
  if (pattern.size() != params.n) {
    throw ContractViolation(params.name() + ": pattern length " + std::to_string(pattern.size()) +
                            " != n");
  }
  if (opts.max_sweeps < 1) throw ContractViolation("max_sweeps must be >= 1");
  if (sink && sink->n() != params.n) throw ContractViolation("schedule builder sized for another code");
  std::vector<EntryId> top;
  if (sink) {
    top.resize(params.n);
    for (std::size_t i = 0; i < params.n; ++i) top[i] = static_cast<EntryId>(i);
  }
  std::optional<ScheduleBuilder::Checkpoint> start;
  if (sink) start = sink->checkpoint();
  ErasurePattern out(Engine(opts, sink, stats).decode(params.r, params.m, pattern.known, top));
  if (out.complete() || !(opts.unpermuted_retry && opts.use_permutations && opts.use_partial)) return out;

  DecodeOptions plain = opts;
  plain.use_permutations = false;
  if (sink) sink->rollback(*start);
  ErasurePattern alt(Engine(plain, sink, stats).decode(params.r, params.m, pattern.known, top));
  if (alt.complete() || !sink) return alt.complete() ? alt : out;
  // Neither completed: keep the permuted attempt's ops and partial result.
  sink->rollback(*start);
  return ErasurePattern(Engine(opts, sink, nullptr).decode(params.r, params.m, pattern.known, top));
}

WordDecodeResult decode_word(std::span<const std::uint8_t> received, const ErasurePattern& pattern,
                             const CodeParams& params, const DecodeOptions& opts) {
  if (received.size() != params.n) throw ContractViolation("decode_word: symbol array length != n");
  ScheduleBuilder builder(pattern);
  const ErasurePattern out = blank_decode_rm(pattern, params, opts, &builder);
  const Schedule schedule = builder.release();

  SlotArena arena(schedule.slot_count, 1);
  for (std::size_t i = 0; i < params.n; ++i) {
    if (pattern.is_known(i)) arena.slot(i)[0] = received[i];
  }
  run_ops(schedule.ops, arena);

  WordDecodeResult result;
  result.success = out.complete();
  result.known = out;
  result.symbols.assign(params.n, 0);
  for (std::size_t i = 0; i < params.n; ++i) {
    if (out.is_known(i)) result.symbols[i] = arena.slot(i)[0];
  }
  return result;
}

}  // namespace rmfec
