#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "radseq/core_arith.hpp"

namespace radseq {

inline constexpr uint64_t kDefaultSegmentSize = uint64_t{1} << 22;
inline constexpr uint64_t kMaxSegmentSize = uint64_t{1} << 26;

// Smallest prime factor for every n <= limit; spf[1] = 1. Requires
// 2 <= limit, capped at 2^32.
struct SpfTable {
  uint64_t limit = 0;
  std::vector<uint32_t> spf;
};

SpfTable build_spf(uint64_t limit);

// Primes <= limit, for marking segments whose values stay below limit^2.
struct BasePrimes {
  uint64_t limit = 0;
  std::vector<uint64_t> primes;
};

BasePrimes base_primes(uint64_t limit);

uint64_t isqrt_u64(uint64_t n);

// rad(n) for n in [lo, hi). Requires 1 <= lo < hi, hi - 1 <= kValueCap,
// hi - lo <= kMaxSegmentSize, and base.limit >= isqrt(hi - 1). After dividing
// out every base prime, a residual above 1 is a single prime factor.
std::vector<uint64_t> radical_range(uint64_t lo, uint64_t hi, const BasePrimes& base);
std::vector<uint64_t> radical_range(uint64_t lo, uint64_t hi);

// Prime supports for n in [lo, hi), same preconditions as radical_range.
std::vector<PrimeSupport> support_range(uint64_t lo, uint64_t hi, const BasePrimes& base);

// Calls emit(n, support of the window [n, n+len)) for every n in [lo, hi),
// in increasing order. Sieves [lo, hi + len - 1) once; the window support is
// assembled per n. Requires len >= 1 and hi - 1 + len - 1 <= kValueCap.
void window_key_stream(uint64_t lo, uint64_t hi, uint64_t len, const BasePrimes& base,
                       const std::function<void(uint64_t, std::span<const uint64_t>)>& emit);

}  // namespace radseq
