#include "rmfec/blank_decoder.hpp"

#include "rmfec/errors.hpp"
#include "rmfec/ml_decoder.hpp"

namespace rmfec {
namespace {

using EntryId = ScheduleBuilder::EntryId;

void extract(ScheduleBuilder& b, int r, int m, std::span<const EntryId> view,
             std::vector<EntryId>& out) {
  if (r == 0) {
    out.push_back(view[0]);
    return;
  }
  if (r >= m) {
    out.insert(out.end(), view.begin(), view.end());
    return;
  }
  const std::size_t half = view.size() / 2;
  extract(b, r, m - 1, view.first(half), out);
  std::vector<EntryId> v(half);
  for (std::size_t j = 0; j < half; ++j) v[j] = b.add_sum(view[j], view[half + j]);
  extract(b, r - 1, m - 1, v, out);
}

std::vector<BitVector> columns_of(const Gf2Matrix& m) {
  std::vector<BitVector> cols;
  cols.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.column(c));
  return cols;
}

}  // namespace

std::string_view policy_name(FallbackPolicy policy) {
  switch (policy) {
    case FallbackPolicy::kNone: return "none";
    case FallbackPolicy::kGeAfterPartial: return "ge_after_partial";
    case FallbackPolicy::kGeOnly: return "ge_only";
  }
  return "?";
}

std::optional<FallbackPolicy> parse_policy(std::string_view name) {
  for (FallbackPolicy p :
       {FallbackPolicy::kNone, FallbackPolicy::kGeAfterPartial, FallbackPolicy::kGeOnly}) {
    if (policy_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<std::uint32_t> append_message_extraction(ScheduleBuilder& builder,
                                                     const CodeParams& params) {
  std::vector<EntryId> top(params.n);
  for (std::size_t i = 0; i < params.n; ++i) top[i] = static_cast<EntryId>(i);
  std::vector<EntryId> message;
  message.reserve(params.k);
  extract(builder, params.r, params.m, top, message);
  std::vector<std::uint32_t> slots(message.size());
  for (std::size_t i = 0; i < message.size(); ++i) slots[i] = builder.materialize(message[i]);
  return slots;
}

BlankDecoder::BlankDecoder(const CodeParams& params, const DecodeOptions& opts,
                           FallbackPolicy policy)
    : params_(params),
      opts_(opts),
      policy_(policy),
      generator_(generator_matrix(params)),
      parity_(parity_check_matrix(params)) {
  if (opts.max_sweeps < 1) throw ContractViolation("max_sweeps must be >= 1");
  // Elimination finishes whatever the recursion leaves, so the retry cannot change the outcome.
  if (policy_ == FallbackPolicy::kGeAfterPartial) opts_.unpermuted_retry = false;
  if (policy_ == FallbackPolicy::kGeOnly) generator_columns_ = columns_of(generator_);
  if (policy_ == FallbackPolicy::kGeAfterPartial && parity_) parity_columns_ = columns_of(*parity_);
}

Schedule BlankDecoder::build(const ErasurePattern& pattern) const {
  if (pattern.size() != params_.n) {
    throw ContractViolation(params_.name() + ": pattern length " + std::to_string(pattern.size()) +
                            " != n");
  }
  if (policy_ == FallbackPolicy::kGeOnly) {
    MlDecodeResult ml = ml_blank_decode(generator_, pattern);
    if (ml.ok()) return *std::move(ml.schedule);
    Schedule failed = ScheduleBuilder(pattern).release();
    failed.recovered = pattern;
    return failed;
  }

  ScheduleBuilder builder(pattern);
  RecursiveStats stats;
  ErasurePattern known = blank_decode_rm(pattern, params_, opts_, &builder, &stats);
  if (!known.complete() && policy_ == FallbackPolicy::kGeAfterPartial &&
      residual_solve(builder, known)) {
    known = ErasurePattern::all_known(params_.n);
  }
  const std::size_t extraction_begin = builder.ops().size();
  std::vector<std::uint32_t> message_slots;
  if (known.complete()) message_slots = append_message_extraction(builder, params_);

  Schedule s = builder.release();
  s.extraction_begin = extraction_begin;
  s.success = known.complete();
  s.recovered = std::move(known);
  s.message_slots = std::move(message_slots);
  s.search_evaluations = stats.search_evaluations;
  return s;
}

bool BlankDecoder::decodable(const ErasurePattern& pattern) const {
  if (pattern.size() != params_.n) throw ContractViolation("decodable: pattern length != n");
  if (policy_ == FallbackPolicy::kGeOnly) {
    Gf2Basis basis(params_.k);
    for (std::size_t j = pattern.known.find_first(); j != BitVector::npos;
         j = pattern.known.find_next(j + 1)) {
      basis.insert(generator_columns_[j]);
      if (basis.rank() == params_.k) return true;
    }
    return false;
  }
  const ErasurePattern known = blank_decode_rm(pattern, params_, opts_, nullptr);
  if (known.complete()) return true;
  return policy_ == FallbackPolicy::kGeAfterPartial && residual_solvable(known);
}

bool BlankDecoder::residual_solvable(const ErasurePattern& known) const {
  if (!parity_ || known.erased_count() > params_.n - params_.k) return false;
  Gf2Basis basis(params_.n - params_.k);
  for (std::size_t u : known.erased_positions()) {
    if (!basis.insert(parity_columns_[u])) return false;
  }
  return true;
}

// Every codeword satisfies H c = 0, so H_U c_U = H_K c_K over the erased set U
// and known set K. Eliminating on H_U gives each erased symbol as a sum of
// known ones whenever H_U has full column rank.
bool BlankDecoder::residual_solve(ScheduleBuilder& builder, const ErasurePattern& known) const {
  if (!parity_) return false;
  const std::vector<std::size_t> erased = known.erased_positions();
  if (erased.size() > params_.n - params_.k) return false;
  const RowOpLog log = ge_reduce(parity_->select_columns(erased));
  if (log.rank < erased.size()) return false;

  Gf2Matrix combine = Gf2Matrix::identity(parity_->rows());
  apply_row_ops(log, combine);
  std::vector<EntryId> sources;
  for (std::size_t i = 0; i < erased.size(); ++i) {
    BitVector relation = vec_mat_mul(combine.row(i), *parity_);
    relation &= known.known;
    sources.clear();
    for (std::size_t j = relation.find_first(); j != BitVector::npos; j = relation.find_next(j + 1)) {
      sources.push_back(static_cast<EntryId>(j));
    }
    builder.write(static_cast<EntryId>(erased[i]), sources);
  }
  return true;
}

Schedule build_schedule(const ErasurePattern& pattern, const CodeParams& params,
                        const DecodeOptions& opts, FallbackPolicy policy) {
  return BlankDecoder(params, opts, policy).build(pattern);
}

}  // namespace rmfec
