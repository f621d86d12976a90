#include "rmfec/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>

#include "rmfec/bench.hpp"
#include "rmfec/block_file.hpp"
#include "rmfec/errors.hpp"
#include "rmfec/erasure_sim.hpp"

namespace rmfec {
namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path);
}

Algorithm algorithm_from(const std::string& name) {
  const auto a = parse_algorithm(name);
  if (!a) throw CLI::ValidationError("--algo", "unknown algorithm '" + name + "'");
  return *a;
}

std::string algorithm_list() {
  std::string s;
  for (Algorithm a : kAllAlgorithms) s += (s.empty() ? "" : ", ") + std::string(algorithm_name(a));
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reed-Muller packet-erasure codec"};
  app.require_subcommand(1);

  int r = 3, m = 7;
  std::size_t z = 1500;
  std::string input, output;
  std::string algo = "full_ge_hybrid";
  std::string policy;
  int max_sweeps = 4;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  long long max_extra = -1;
  unsigned threads = 1;
  std::vector<std::size_t> bench_z{1500};
  std::vector<std::string> bench_algos{"full", "ml"};
  double extra_pct = 5.0;

  auto* encode = app.add_subcommand("encode", "Encode a file into framed packet blocks");
  encode->add_option("-r", r, "Code order")->required();
  encode->add_option("-m", m, "log2 of the block length")->required();
  encode->add_option("-z", z, "Packet payload size in bytes")->check(CLI::PositiveNumber);
  encode->add_option("-i,--input", input, "Input file")->required();
  encode->add_option("-o,--output", output, "Output block file")->required();

  auto* decode = app.add_subcommand("decode", "Decode a block file, tolerating lost or damaged packets");
  decode->add_option("-i,--input", input, "Block file")->required();
  decode->add_option("-o,--output", output, "Restored file")->required();
  decode->add_option("--algo", algo, "Decoder: " + algorithm_list())->capture_default_str();
  decode->add_option("--policy", policy, "Override fallback: none, ge_after_partial, ge_only");
  decode->add_option("--max-sweeps", max_sweeps, "Partial-decoding sweep limit")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Failure-rate curve under random packet loss, as CSV");
  simulate->add_option("-r", r, "Code order")->required();
  simulate->add_option("-m", m, "log2 of the block length")->required();
  simulate->add_option("--algo", algo, "Decoder: " + algorithm_list())->required();
  simulate->add_option("--trials", trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Random seed")->capture_default_str();
  simulate->add_option("--max-extra", max_extra, "Largest e in the curve (default ceil(0.2 k), capped at n - k)");
  simulate->add_option("--threads", threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--max-sweeps", max_sweeps, "Partial-decoding sweep limit")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Decode speed and schedule op counts at a fixed overhead");
  bench->add_option("-r", r, "Code order")->required();
  bench->add_option("-m", m, "log2 of the block length")->required();
  bench->add_option("-z", bench_z, "Packet sizes in bytes; 0 times the blank phase only")->capture_default_str();
  bench->add_option("--extra-pct", extra_pct, "Extra symbols above k, in percent of k")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--algo", bench_algos, "Decoders: " + algorithm_list())->capture_default_str();
  bench->add_option("--seed", seed, "Pattern seed")->capture_default_str();

  std::vector<std::string> argv_storage{"rmfec"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*encode) {
      const CodeParams params = code_params(r, m);
      if (params.n > 0x10000) throw ParameterError("encode: block length above 65536 does not fit the slot field");
      write_file(output, encode_file(read_file(input), params, z));
      return kExitOk;
    }
    if (*decode) {
      DecoderConfig dc = decoder_config(algorithm_from(algo), max_sweeps);
      if (!policy.empty()) {
        const auto p = parse_policy(policy);
        if (!p) throw CLI::ValidationError("--policy", "unknown policy '" + policy + "'");
        dc.policy = *p;
      }
      const FileDecodeResult result = decode_file(read_file(input), dc.opts, dc.policy);
      if (result.malformed_frames > 0) err << "skipped " << result.malformed_frames << " malformed packet(s)\n";
      if (!result.success) {
        err << "error: " << result.failed_blocks << " of " << result.blocks << " block(s) could not be decoded\n";
        return kExitDecodeFailed;
      }
      write_file(output, result.data);
      return kExitOk;
    }
    if (*simulate) {
      TrialConfig config;
      config.params = code_params(r, m);
      config.algorithm = algorithm_from(algo);
      config.trials = trials;
      config.seed = seed;
      config.threads = threads;
      config.max_sweeps = max_sweeps;
      const std::size_t slack = config.params.n - config.params.k;
      if (max_extra < 0) {
        config.max_extra = std::min(slack, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(config.params.k))));
      } else if (static_cast<std::size_t>(max_extra) > slack) {
        throw CLI::ValidationError("--max-extra", "must not exceed n - k = " + std::to_string(slack));
      } else {
        config.max_extra = static_cast<std::size_t>(max_extra);
      }
      out << curve_csv(config, run_curve(config));
      return kExitOk;
    }
    if (*bench) {
      BenchConfig config;
      config.params = code_params(r, m);
      config.packet_sizes = bench_z;
      config.extra_pct = extra_pct;
      config.seed = seed;
      config.algorithms.clear();
      for (const auto& name : bench_algos) config.algorithms.push_back(algorithm_from(name));
      if (config.algorithms.empty()) throw CLI::ValidationError("--algo", "at least one algorithm required");
      out << format_bench(config, run_bench(config));
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace rmfec
