#include "rmfec/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <random>

#include "rmfec/errors.hpp"
#include "rmfec/packet_block.hpp"

namespace rmfec {
namespace {

using Clock = std::chrono::steady_clock;

// Mean seconds per call of f, repeating until min_seconds have elapsed.
template <typename F>
double time_per_call(double min_seconds, F&& f) {
  std::size_t calls = 0;
  const auto start = Clock::now();
  double elapsed = 0;
  do {
    f();
    ++calls;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < min_seconds || calls < 3);
  return elapsed / static_cast<double>(calls);
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  const CodeParams& p = config.params;
  const auto extra = static_cast<std::size_t>(std::ceil(config.extra_pct / 100.0 * static_cast<double>(p.k)));
  BenchReport report;
  report.received = std::min(p.n, p.k + extra);

  std::vector<BlankDecoder> decoders;
  for (Algorithm a : config.algorithms) {
    const DecoderConfig dc = decoder_config(a);
    decoders.emplace_back(p, dc.opts, dc.policy);
  }

  bool found = false;
  for (std::size_t trial = 0; trial < 10000 && !found; ++trial) {
    const auto order = arrival_order(p.n, config.seed, trial);
    ErasurePattern pattern = ErasurePattern::from_prefix(p.n, order, report.received);
    found = true;
    for (const BlankDecoder& d : decoders) found = found && d.decodable(pattern);
    if (found) {
      report.pattern = std::move(pattern);
      report.pattern_trial = trial;
    }
  }
  if (!found) throw ContractViolation("bench: no pattern decodable by every algorithm");

  std::mt19937_64 rng(config.seed);
  for (std::size_t z : config.packet_sizes) {
    // Random payloads in the received slots; replay cost does not depend on values.
    std::vector<Payload> received(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
      if (!report.pattern.is_known(i)) continue;
      received[i].resize(z);
      for (auto& byte : received[i]) byte = static_cast<std::uint8_t>(rng());
    }

    for (std::size_t a = 0; a < decoders.size(); ++a) {
      const BlankDecoder& decoder = decoders[a];
      BenchRow row;
      row.algorithm = config.algorithms[a];
      row.z = z;

      Schedule schedule;
      row.build_seconds = time_per_call(config.min_seconds, [&] { schedule = decoder.build(report.pattern); });
      row.decode_ops = op_count(schedule.decode_ops());
      row.extraction_ops = op_count(schedule.extraction_ops());
      row.search_evaluations = schedule.search_evaluations;

      if (z > 0) {
        auto replay_once = [&](bool extraction) {
          SlotArena arena(schedule.slot_count, z);
          for (std::size_t i = 0; i < p.n; ++i) {
            if (report.pattern.is_known(i)) std::copy(received[i].begin(), received[i].end(), arena.slot(i).begin());
          }
          run_ops(schedule.decode_ops(), arena);
          if (extraction) run_ops(schedule.extraction_ops(), arena);
        };
        row.replay_seconds = time_per_call(config.min_seconds, [&] { replay_once(true); });
        const double without = time_per_call(config.min_seconds, [&] { replay_once(false); });
        row.extract_seconds = std::max(0.0, row.replay_seconds - without);
        const double bits = static_cast<double>(p.k * z * 8);
        const double total = row.build_seconds + row.replay_seconds;
        row.replay_mbps = bits / row.replay_seconds / 1e6;
        row.throughput_mbps = bits / total / 1e6;
        row.throughput_excl_extraction_mbps = bits / (total - row.extract_seconds) / 1e6;
        row.blank_share = row.build_seconds / total;
      } else {
        row.blank_share = 1.0;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string format_bench(const BenchConfig& config, const BenchReport& report) {
  const CodeParams& p = config.params;
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%s k=%zu n=%zu received=%zu (%.1f%% extra), pattern trial %zu\n",
                p.name().c_str(), p.k, p.n, report.received, config.extra_pct, report.pattern_trial);
  out += line;
  out += "algorithm       z      build_us   replay_us  extract_us  replay_Mbps  Mbps      Mbps_no_extract  blank_share  "
         "copies   xors     extract_xors  search_evals\n";
  for (const BenchRow& r : report.rows) {
    const std::string name(algorithm_name(r.algorithm));
    if (r.z == 0) {
      std::snprintf(line, sizeof line, "%-15s %-6zu %-10.1f %-10s %-11s %-12s %-9s %-16s %-12.2f %-8zu %-8zu %-13zu %llu\n",
                    name.c_str(), r.z, r.build_seconds * 1e6, "n/a", "n/a", "n/a", "n/a", "n/a", r.blank_share,
                    r.decode_ops.copies + r.extraction_ops.copies, r.decode_ops.xors, r.extraction_ops.xors,
                    static_cast<unsigned long long>(r.search_evaluations));
    } else {
      std::snprintf(line, sizeof line,
                    "%-15s %-6zu %-10.1f %-10.1f %-11.1f %-12.1f %-9.1f %-16.1f %-12.2f %-8zu %-8zu %-13zu %llu\n",
                    name.c_str(), r.z, r.build_seconds * 1e6, r.replay_seconds * 1e6, r.extract_seconds * 1e6,
                    r.replay_mbps, r.throughput_mbps, r.throughput_excl_extraction_mbps, r.blank_share,
                    r.decode_ops.copies + r.extraction_ops.copies, r.decode_ops.xors, r.extraction_ops.xors,
                    static_cast<unsigned long long>(r.search_evaluations));
    }
    out += line;
  }
  // Ratios of the first algorithm against each other one, per packet size.
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BenchRow& base = report.rows[i];
    if (base.algorithm != config.algorithms.front()) continue;
    for (const BenchRow& other : report.rows) {
      if (other.z != base.z || other.algorithm == base.algorithm) continue;
      const double ops_ratio = static_cast<double>(other.decode_ops.xors + other.extraction_ops.xors) /
                               static_cast<double>(std::max<std::size_t>(1, base.decode_ops.xors + base.extraction_ops.xors));
      std::snprintf(line, sizeof line, "z=%zu %s/%s: xor-op ratio %.2f", base.z,
                    std::string(algorithm_name(other.algorithm)).c_str(),
                    std::string(algorithm_name(base.algorithm)).c_str(), ops_ratio);
      out += line;
      if (base.z > 0 && other.throughput_mbps > 0) {
        std::snprintf(line, sizeof line, ", speed ratio %.2fx", base.throughput_mbps / other.throughput_mbps);
        out += line;
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace rmfec
