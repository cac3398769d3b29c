#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace radseq::cli {

enum class Command { kSieve, kRuns, kWindows, kStormer, kPell, kNxy, kBounds, kQuality, kVerify };

enum class Format { kJsonl, kCsv };

// Bad flags, bad flag values, or a checkpoint that does not fit the job.
// Mapped to exit code 1; math errors (DomainError/CapacityError) map to 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct HelpRequested {
  std::string text;
};

struct JobConfig {
  Command command = Command::kSieve;
  Format format = Format::kJsonl;
  unsigned threads = 1;
  uint64_t segment_size = 0;
  std::string out_path;
  std::string checkpoint_path;
  uint64_t stop_after = 0;  // testing hook: stop after N work units, exit 3
  bool verbose = false;

  uint64_t limit = 0;
  uint64_t k = 0;
  uint64_t l = 0;
  std::vector<uint64_t> primes;
  uint64_t lo = 0;  // sieve range, or optional [lo, hi) shard filter on n
  uint64_t hi = 0;
  bool has_shard = false;

  uint64_t d = 0;  // pell
  std::string max_x;
  uint32_t count = 0;

  uint64_t x = 0;  // nxy
  uint64_t y = 0;

  uint64_t n = 0;  // bounds / quality single value
  bool has_n = false;
  uint64_t samples = 0;  // bounds sweep
  uint64_t max_k = 30;
  uint64_t seed = 1;

  uint64_t pair_m = 0;  // verify --pair
  uint64_t pair_n = 0;
  bool has_pair = false;
  bool family = false;
  uint32_t k_min = 2;
  uint32_t k_max = 40;
};

// Parses argv (without the program name). Throws UsageError on bad input and
// HelpRequested when -h/--help is hit.
JobConfig parse_args(const std::vector<std::string>& args);

// Runs a parsed job, records to `out` (or the configured --out file),
// diagnostics and progress to `err`. Returns 0, or 3 when stopped early by
// --stop-after. Throws UsageError / DomainError / CapacityError.
int execute(const JobConfig& cfg, std::ostream& out, std::ostream& err);

// Full entry point: parse, execute, map exceptions to exit codes 1 and 2.
int run_main(int argc, char** argv);

}  // namespace radseq::cli
