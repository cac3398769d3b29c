#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "radseq/core_arith.hpp"
#include "radseq/engine.hpp"
#include "radseq/fingerprint.hpp"

namespace radseq {

// Matches reported by a finalize pass are capped; past this, shard the range.
inline constexpr uint64_t kPairBudget = uint64_t{1} << 24;

struct RunResult {
  uint64_t length = 0;
  bool truncated = false;  // stopped at cap with the run still going
};

// Largest r <= cap with rad(m+i) = rad(n+i) for all i < r. Requires m < n,
// cap >= 1 and n + cap - 1 <= kValueCap.
RunResult run_length(uint64_t m, uint64_t n, uint64_t cap);

// True when the run of equal radicals starting at (m, n) reaches k.
bool verify_pair(uint64_t m, uint64_t n, uint64_t k);

struct PairMatch {
  uint64_t m = 0;
  uint64_t n = 0;
  uint64_t run = 0;
  bool truncated = false;
};

struct WindowMatch {
  uint64_t m = 0;
  uint64_t n = 0;
  uint64_t k = 0;
  uint64_t l = 0;
  PrimeSupport key;
};

// Fingerprint -> starting values with that key. Mergeable and serializable so
// scans can run in waves and resume from a checkpoint.
class KeyStore {
 public:
  void add(const Fp128& fp, uint64_t n, int role);
  void merge_from(KeyStore&& other);
  uint64_t entries() const { return entries_; }

  struct Group {
    std::vector<uint64_t> a;  // role 0
    std::vector<uint64_t> b;  // role 1
  };
  const std::unordered_map<Fp128, Group, Fp128Hash>& groups() const { return groups_; }

  void save(std::ostream& out) const;
  static KeyStore load(std::istream& in);

 private:
  std::unordered_map<Fp128, Group, Fp128Hash> groups_;
  uint64_t entries_ = 0;
};

// Absorbs run keys (the radical sequence of length k starting at n) for every
// n in segments [first_seg, last_seg) of the plan, as role 0.
void scan_run_keys(const SegmentPlan& plan, uint64_t first_seg, uint64_t last_seg, uint64_t k,
                   unsigned threads, const BasePrimes& base, KeyStore& store);

// Absorbs window keys: support of [n, n+k) as role 0, and when l != k also
// support of [n, n+l) as role 1.
void scan_window_keys(const SegmentPlan& plan, uint64_t first_seg, uint64_t last_seg, uint64_t k,
                      uint64_t l, unsigned threads, const BasePrimes& base, KeyStore& store);

// Confirmed pairs m < n with run >= k, n in [n_lo, n_hi), runs extended up to
// cap = x. Every group candidate is re-verified with run_length before being
// reported; output sorted by (n, m).
std::vector<PairMatch> finalize_run_pairs(const KeyStore& store, uint64_t x, uint64_t k,
                                          uint64_t n_lo, uint64_t n_hi);

// Confirmed pairs m < n with support[m, m+k) = support[n, n+l), n in
// [n_lo, n_hi), re-verified with window_support; sorted by (n, m).
std::vector<WindowMatch> finalize_window_matches(const KeyStore& store, uint64_t k, uint64_t l,
                                                 uint64_t n_lo, uint64_t n_hi);

// All pairs m < n <= x whose equal-radical run reaches k, runs maximal up to
// cap = x. Requires x >= 2, k >= 1.
std::vector<PairMatch> equal_run_pairs(uint64_t x, uint64_t k, unsigned threads = 1);

// All pairs m < n <= x with support[m, m+k) = support[n, n+l).
std::vector<WindowMatch> window_matches(uint64_t x, uint64_t k, uint64_t l, unsigned threads = 1);

// Growth bound x * exp(l * log2 * log x / loglog x) on the number of window
// matches up to x; infinity for x < 3 where the double log degenerates.
double window_count_bound(uint64_t x, uint64_t l);

// One member of the doubling family m = 2^k - 2, n = 2^k * (2^k - 2), checked
// exactly: equal supports at (m, n), equal supports at (m+1, n+1), and
// n + 1 = (m + 1)^2. Values as decimal strings since n overflows 64 bits.
struct FamilyRecord {
  uint32_t k = 0;
  std::string m;
  std::string n;
  bool rad_match = false;
  bool rad_next_match = false;
  bool square_identity = false;
  std::vector<std::pair<uint64_t, uint32_t>> mersenne_factors;  // of 2^k - 1

  bool ok() const { return rad_match && rad_next_match && square_identity; }
};

// Requires 2 <= k_min <= k_max <= 64.
std::vector<FamilyRecord> verify_family(uint32_t k_min, uint32_t k_max);

}  // namespace radseq
