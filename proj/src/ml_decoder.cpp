#include "rmfec/ml_decoder.hpp"

#include "rmfec/errors.hpp"

namespace rmfec {

MlDecodeResult ml_blank_decode(const Gf2Matrix& g, const ErasurePattern& pattern) {
  if (pattern.size() != g.cols()) {
    throw ContractViolation("ml_blank_decode: pattern length " + std::to_string(pattern.size()) +
                            " != generator columns " + std::to_string(g.cols()));
  }
  const std::size_t k = g.rows();
  const std::vector<std::size_t> known = pattern.known_positions();
  MlDecodeResult result;
  if (known.empty()) return result;

  // One equation per received position: column j of G dotted with the message.
  const Gf2Matrix system = g.select_columns(known).transpose();
  const RowOpLog log = ge_reduce(system);
  result.rank = log.rank;
  if (log.rank < k) return result;

  // The same row ops applied to the identity express each reduced row as a
  // sum of received positions. Full column rank puts message bit i on row i.
  Gf2Matrix combine = Gf2Matrix::identity(known.size());
  apply_row_ops(log, combine);

  ScheduleBuilder builder(pattern);
  std::vector<ScheduleBuilder::EntryId> message(k);
  std::vector<ScheduleBuilder::EntryId> sources;
  for (std::size_t i = 0; i < k; ++i) {
    sources.clear();
    const BitVector row = combine.row(i);
    for (std::size_t j = row.find_first(); j != BitVector::npos; j = row.find_next(j + 1)) {
      sources.push_back(static_cast<ScheduleBuilder::EntryId>(known[j]));
    }
    message[i] = builder.add_unknown();
    builder.write(message[i], sources);
  }

  for (std::size_t pos : pattern.erased_positions()) {
    sources.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (g.get(i, pos)) sources.push_back(message[i]);
    }
    builder.write(static_cast<ScheduleBuilder::EntryId>(pos), sources);
  }

  std::vector<std::uint32_t> message_slots(k);
  for (std::size_t i = 0; i < k; ++i) message_slots[i] = builder.materialize(message[i]);

  Schedule s = builder.release();
  s.success = true;
  s.recovered = ErasurePattern::all_known(pattern.size());
  s.message_slots = std::move(message_slots);
  result.schedule = std::move(s);
  return result;
}

}  // namespace rmfec
