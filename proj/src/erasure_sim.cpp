#include "rmfec/erasure_sim.hpp"

#include <cstdio>
#include <random>
#include <thread>

#include "rmfec/errors.hpp"

namespace rmfec {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, bound).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kClassical: return "classical";
    case Algorithm::kPermOnly: return "perm_only";
    case Algorithm::kPartialOnly: return "partial_only";
    case Algorithm::kFull: return "full";
    case Algorithm::kFullGeHybrid: return "full_ge_hybrid";
    case Algorithm::kMl: return "ml";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

DecoderConfig decoder_config(Algorithm a, int max_sweeps) {
  DecoderConfig c;
  switch (a) {
    case Algorithm::kClassical: c.opts = DecodeOptions::classical(); break;
    case Algorithm::kPermOnly: c.opts = DecodeOptions::permutation_only(); break;
    case Algorithm::kPartialOnly: c.opts = DecodeOptions::partial_only(); break;
    case Algorithm::kFull: c.opts = DecodeOptions::full(); break;
    case Algorithm::kFullGeHybrid:
      c.opts = DecodeOptions::full();
      c.policy = FallbackPolicy::kGeAfterPartial;
      break;
    case Algorithm::kMl:
      c.opts = DecodeOptions::full();
      c.policy = FallbackPolicy::kGeOnly;
      break;
  }
  c.opts.max_sweeps = max_sweeps;
  return c;
}

NeededSymbols::NeededSymbols(const CodeParams& params, Algorithm algorithm, int max_sweeps)
    : params_(params),
      algorithm_(algorithm),
      decoder_(params, decoder_config(algorithm, max_sweeps).opts, decoder_config(algorithm, max_sweeps).policy) {
  if (algorithm == Algorithm::kMl) {
    const Gf2Matrix g = generator_matrix(params);
    generator_columns_.reserve(params.n);
    for (std::size_t c = 0; c < params.n; ++c) generator_columns_.push_back(g.column(c));
  }
}

std::size_t NeededSymbols::operator()(std::span<const std::size_t> order) const {
  if (order.size() != params_.n) throw ContractViolation("arrival order must list all n positions");
  if (algorithm_ == Algorithm::kMl) {
    // Prefix rank grows one column at a time; no need to rebuild per prefix.
    Gf2Basis basis(params_.k);
    for (std::size_t i = 0; i < order.size(); ++i) {
      basis.insert(generator_columns_[order[i]]);
      if (basis.rank() == params_.k) return i + 1;
    }
    return undecodable(params_);
  }
  ErasurePattern pattern = ErasurePattern::from_prefix(params_.n, order, params_.k);
  for (std::size_t count = params_.k; count <= params_.n; ++count) {
    if (count > params_.k) pattern.known.set(order[count - 1]);
    if (decoder_.decodable(pattern)) return count;
  }
  return undecodable(params_);
}

std::size_t needed_symbols(const CodeParams& params, Algorithm algorithm,
                           std::span<const std::size_t> arrival_order) {
  return NeededSymbols(params, algorithm)(arrival_order);
}

std::vector<std::size_t> arrival_order(std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  std::mt19937_64 rng(splitmix64(seed ^ trial));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

OverheadStats run_curve(const TrialConfig& config) {
  const CodeParams& p = config.params;
  if (config.trials == 0) throw ContractViolation("run_curve: trials must be >= 1");
  if (config.max_extra > p.n - p.k) throw ContractViolation("run_curve: max_extra exceeds n - k");

  const NeededSymbols needed(p, config.algorithm, config.max_sweeps);
  OverheadStats stats;
  stats.trials = config.trials;
  stats.needed.assign(config.trials, 0);

  const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < config.trials; i += workers) {
      stats.needed[i] = needed(arrival_order(p.n, config.seed, i));
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  double extra_sum = 0.0;
  for (std::size_t n_needed : stats.needed) extra_sum += static_cast<double>(n_needed - p.k);
  stats.mean_extra = extra_sum / static_cast<double>(config.trials);
  stats.mean_overhead_pct = 100.0 * stats.mean_extra / static_cast<double>(p.k);
  for (std::size_t e = 0; e <= config.max_extra; ++e) {
    std::size_t failures = 0;
    for (std::size_t n_needed : stats.needed) failures += n_needed > p.k + e;
    stats.failure_rates.emplace_back(e, static_cast<double>(failures) / static_cast<double>(config.trials));
  }
  return stats;
}

std::string curve_csv(const TrialConfig& config, const OverheadStats& stats) {
  const std::string code = "\"" + config.params.name() + "\"";
  const std::string algo(algorithm_name(config.algorithm));
  const std::string tail = "," + std::to_string(stats.trials) + "," + std::to_string(config.seed) + "\n";
  std::string out = "code,algorithm,extra,failure_rate,trials,seed\n";
  char value[64];
  for (const auto& [e, rate] : stats.failure_rates) {
    std::snprintf(value, sizeof value, "%.6f", rate);
    out += code + "," + algo + "," + std::to_string(e) + "," + value + tail;
  }
  std::snprintf(value, sizeof value, "%.4f", stats.mean_overhead_pct);
  out += code + "," + algo + ",overhead_pct," + value + tail;
  return out;
}

}  // namespace rmfec
