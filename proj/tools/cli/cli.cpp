#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "radseq/core_arith.hpp"
#include "radseq/sieve.hpp"

namespace radseq::cli {
namespace {

bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr uint64_t kMinSegmentSize = 1024;

uint64_t segment_size_default() {
  const char* env = std::getenv("RADSEQ_SEGMENT_SIZE");
  if (!env || !*env) return kDefaultSegmentSize;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || !is_pow2(v) || v < kMinSegmentSize || v > kMaxSegmentSize)
    throw UsageError("RADSEQ_SEGMENT_SIZE must be a power of two in [1024, 2^26]");
  return v;
}

}  // namespace

JobConfig parse_args(const std::vector<std::string>& args) {
  JobConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  cfg.segment_size = segment_size_default();

  CLI::App app{"radicals of consecutive integers: sieves, matching pairs, Pell searches"};
  app.require_subcommand(1);
  std::string format = "jsonl";
  std::vector<uint64_t> pair_values;

  auto add_common = [&](CLI::App* sub, bool segmented, bool checkpointed) {
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--format", format, "output format: jsonl or csv");
    sub->add_option("--out", cfg.out_path, "write records to this file instead of stdout");
    sub->add_flag("--verbose", cfg.verbose, "progress diagnostics on stderr");
    if (segmented)
      sub->add_option("--segment-size", cfg.segment_size,
                      "segment width, power of two in [1024, 2^26]");
    if (checkpointed) {
      sub->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint file, resume if present");
      sub->add_option("--stop-after", cfg.stop_after,
                      "stop with exit code 3 after N work units (testing hook)");
    }
  };

  CLI::App* sieve = app.add_subcommand("sieve", "radical of every n in [lo, hi)");
  sieve->add_option("--lo", cfg.lo, "range start (inclusive)")->required();
  sieve->add_option("--hi", cfg.hi, "range end (exclusive)")->required();
  add_common(sieve, true, true);

  CLI::App* runs = app.add_subcommand("runs", "pairs m < n <= limit with rad(m+i) = rad(n+i) for i < k");
  runs->add_option("--limit", cfg.limit, "search bound x")->required();
  runs->add_option("--k", cfg.k, "minimum run length")->required();
  runs->add_option("--lo", cfg.lo, "report only n in [lo, hi)");
  runs->add_option("--hi", cfg.hi, "report only n in [lo, hi)");
  add_common(runs, true, true);

  CLI::App* windows = app.add_subcommand(
      "windows", "pairs m < n <= limit with equal window supports rad[m, m+k) = rad[n, n+l)");
  windows->add_option("--limit", cfg.limit, "search bound x")->required();
  windows->add_option("--k", cfg.k, "window length at m")->required();
  windows->add_option("--l", cfg.l, "window length at n")->required();
  windows->add_option("--lo", cfg.lo, "report only n in [lo, hi)");
  windows->add_option("--hi", cfg.hi, "report only n in [lo, hi)");
  add_common(windows, true, true);

  CLI::App* stormer = app.add_subcommand(
      "stormer", "all n <= limit with every prime factor of n(n+1) in the given set");
  stormer->add_option("--primes", cfg.primes, "comma-separated primes")->required()->delimiter(',');
  stormer->add_option("--limit", cfg.limit, "search bound x")->required();
  stormer->add_option("--lo", cfg.lo, "report only n in [lo, hi)");
  stormer->add_option("--hi", cfg.hi, "report only n in [lo, hi)");
  add_common(stormer, false, true);

  CLI::App* pell = app.add_subcommand("pell", "solutions of x^2 - d*y^2 = 1");
  pell->add_option("--d", cfg.d, "coefficient d (nonsquare, >= 2)")->required();
  pell->add_option("--max-x", cfg.max_x, "emit all solutions with x <= this decimal value");
  pell->add_option("--count", cfg.count, "emit this many solutions from the fundamental one");
  add_common(pell, false, false);

  CLI::App* nxy = app.add_subcommand("nxy", "count n <= x with rad(n) <= y, with the growth estimate");
  nxy->add_option("--x", cfg.x, "range bound")->required();
  nxy->add_option("--y", cfg.y, "radical bound")->required();
  add_common(nxy, false, false);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "radical product inequality check, adjacent minimum and window exponent constant");
  bounds->add_option("--n", cfg.n, "window start");
  bounds->add_option("--k", cfg.k, "window length");
  bounds->add_option("--samples", cfg.samples, "random (n, k) sweep instead of a single check");
  bounds->add_option("--limit", cfg.limit, "sweep draws n from [1, limit]");
  bounds->add_option("--max-k", cfg.max_k, "sweep draws k from [1, max-k]");
  bounds->add_option("--seed", cfg.seed, "sweep RNG seed");
  add_common(bounds, false, false);

  CLI::App* quality = app.add_subcommand(
      "quality", "radical quality log(n+1)/log rad(n(n+1)), single value or scan record-setters");
  quality->add_option("--n", cfg.n, "single value");
  quality->add_option("--limit", cfg.limit, "scan 2 <= n <= limit");
  add_common(quality, false, false);

  CLI::App* verify = app.add_subcommand("verify", "check a reported pair, or the doubling family");
  verify->add_option("--pair", pair_values, "m n: confirm the run of equal radicals reaches k")
      ->expected(2);
  verify->add_option("--k", cfg.k, "run length to confirm (default 2)");
  verify->add_flag("--family", cfg.family, "check m = 2^k - 2, n = 2^k (2^k - 2) identities");
  verify->add_option("--k-min", cfg.k_min, "family range start");
  verify->add_option("--k-max", cfg.k_max, "family range end");
  add_common(verify, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (CLI::App* sub : app.get_subcommands())
      throw HelpRequested{sub->help()};
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (format == "jsonl")
    cfg.format = Format::kJsonl;
  else if (format == "csv")
    cfg.format = Format::kCsv;
  else
    throw UsageError("--format must be jsonl or csv");

  if (!is_pow2(cfg.segment_size) || cfg.segment_size < kMinSegmentSize ||
      cfg.segment_size > kMaxSegmentSize)
    throw UsageError("--segment-size must be a power of two in [1024, 2^26]");

  auto shard_defaults = [&](CLI::App* sub, uint64_t limit) {
    cfg.has_shard = sub->count("--lo") > 0 || sub->count("--hi") > 0;
    if (sub->count("--lo") == 0) cfg.lo = 1;
    if (sub->count("--hi") == 0) cfg.hi = limit + 1;
    if (cfg.lo < 1 || cfg.lo >= cfg.hi || cfg.hi > limit + 1)
      throw UsageError("shard bounds must satisfy 1 <= lo < hi <= limit+1");
  };

  if (sieve->parsed()) {
    cfg.command = Command::kSieve;
    if (cfg.lo < 1 || cfg.lo >= cfg.hi) throw UsageError("sieve requires 1 <= lo < hi");
  } else if (runs->parsed()) {
    cfg.command = Command::kRuns;
    if (cfg.limit < 2) throw UsageError("runs requires --limit >= 2");
    if (cfg.k < 1) throw UsageError("runs requires --k >= 1");
    shard_defaults(runs, cfg.limit);
  } else if (windows->parsed()) {
    cfg.command = Command::kWindows;
    if (cfg.limit < 2) throw UsageError("windows requires --limit >= 2");
    if (cfg.k < 1 || cfg.l < 1) throw UsageError("windows requires --k >= 1 and --l >= 1");
    shard_defaults(windows, cfg.limit);
  } else if (stormer->parsed()) {
    cfg.command = Command::kStormer;
    if (cfg.limit < 1) throw UsageError("stormer requires --limit >= 1");
    if (cfg.primes.empty()) throw UsageError("stormer requires a nonempty --primes list");
    std::sort(cfg.primes.begin(), cfg.primes.end());
    cfg.primes.erase(std::unique(cfg.primes.begin(), cfg.primes.end()), cfg.primes.end());
    for (uint64_t p : cfg.primes)
      if (!is_prime_u64(p)) throw UsageError("--primes contains a non-prime: " + std::to_string(p));
    shard_defaults(stormer, cfg.limit);
  } else if (pell->parsed()) {
    cfg.command = Command::kPell;
    bool has_max = pell->count("--max-x") > 0;
    bool has_count = pell->count("--count") > 0;
    if (has_max && has_count) throw UsageError("pell takes --max-x or --count, not both");
    if (!has_max && !has_count) cfg.count = 1;
    if (has_max) {
      if (cfg.max_x.empty() ||
          !std::all_of(cfg.max_x.begin(), cfg.max_x.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw UsageError("--max-x must be a decimal integer");
    } else if (cfg.count < 1) {
      throw UsageError("pell requires --count >= 1");
    }
  } else if (nxy->parsed()) {
    cfg.command = Command::kNxy;
    if (cfg.x < 1 || cfg.y < 1) throw UsageError("nxy requires --x >= 1 and --y >= 1");
  } else if (bounds->parsed()) {
    cfg.command = Command::kBounds;
    bool sweep = bounds->count("--samples") > 0;
    bool single = bounds->count("--n") > 0 || bounds->count("--k") > 0;
    if (sweep == single)
      throw UsageError("bounds takes either --n and --k, or a --samples sweep");
    if (sweep) {
      if (cfg.samples < 1) throw UsageError("bounds requires --samples >= 1");
      if (bounds->count("--limit") == 0) throw UsageError("bounds sweep requires --limit");
      if (cfg.limit < 1 || cfg.max_k < 1)
        throw UsageError("bounds sweep requires --limit >= 1 and --max-k >= 1");
    } else {
      if (bounds->count("--n") == 0 || bounds->count("--k") == 0)
        throw UsageError("bounds requires both --n and --k");
      cfg.has_n = true;
    }
  } else if (quality->parsed()) {
    cfg.command = Command::kQuality;
    bool has_n = quality->count("--n") > 0;
    bool has_limit = quality->count("--limit") > 0;
    if (has_n == has_limit) throw UsageError("quality takes exactly one of --n or --limit");
    cfg.has_n = has_n;
  } else if (verify->parsed()) {
    cfg.command = Command::kVerify;
    cfg.has_pair = verify->count("--pair") > 0;
    if (cfg.has_pair == cfg.family)
      throw UsageError("verify takes exactly one of --pair or --family");
    if (cfg.has_pair) {
      cfg.pair_m = pair_values[0];
      cfg.pair_n = pair_values[1];
      if (verify->count("--k") == 0) cfg.k = 2;
      if (cfg.k < 1) throw UsageError("verify requires --k >= 1");
    }
  }

  if (!cfg.checkpoint_path.empty() && cfg.command == Command::kSieve && cfg.out_path.empty())
    throw UsageError("sieve --checkpoint requires --out so completed bytes can be tracked");
  return cfg;
}

int run_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  JobConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }
  try {
    return execute(cfg, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace radseq::cli
