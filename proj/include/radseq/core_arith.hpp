#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "radseq/errors.hpp"

namespace radseq {

// Machine-width search routines stay below this value so that products of two
// adjacent entries and radical products still fit in unsigned 128-bit
// intermediates with headroom. Larger inputs are a DomainError.
inline constexpr uint64_t kValueCap = uint64_t{1} << 62;

// Prime-power decomposition, factors sorted by prime.
struct Factorization {
  uint64_t value = 1;
  std::vector<std::pair<uint64_t, uint32_t>> factors;
};

// Sorted distinct primes. The canonical structural form of a value: two values
// have the same radical exactly when their supports are equal.
struct PrimeSupport {
  std::vector<uint64_t> primes;

  friend bool operator==(const PrimeSupport&, const PrimeSupport&) = default;

  // Product of the primes (the radical) when it fits below the value cap.
  std::optional<uint64_t> value_if_fits() const;
};

bool is_prime_u64(uint64_t n);

// Full-range deterministic factorization (trial division below 10^6, then
// Brent rho with a deterministic Miller-Rabin). No value cap.
std::vector<std::pair<uint64_t, uint32_t>> prime_factors_u64(uint64_t n);

// Requires 1 <= n <= kValueCap.
Factorization factorize(uint64_t n);

uint64_t radical(uint64_t n);
PrimeSupport radical_support(uint64_t n);

// Union of the supports of n, n+1, ..., n+len-1. Requires len >= 1 and the
// last value at or below the cap.
PrimeSupport window_support(uint64_t n, uint64_t len);

// Sorts, deduplicates and validates primality. DomainError on a non-prime.
PrimeSupport canonical_support(std::vector<uint64_t> primes);

// All 2^k subsets in bitmask-counting order: bit i of the mask selects the
// i-th smallest prime, so {2,3} yields [{}, {2}, {3}, {2,3}]. Supports with
// more than 30 primes are a CapacityError.
std::vector<PrimeSupport> squarefree_divisors(const PrimeSupport& support);

bool support_subset(const PrimeSupport& a, const PrimeSupport& b);

}  // namespace radseq
