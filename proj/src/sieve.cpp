#include "radseq/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace radseq {

SpfTable build_spf(uint64_t limit) {
  if (limit < 2) throw DomainError("build_spf: limit must be at least 2");
  if (limit > (uint64_t{1} << 32)) throw CapacityError("build_spf: limit cap is 2^32");
  SpfTable t;
  t.limit = limit;
  t.spf.assign(limit + 1, 0);
  t.spf[1] = 1;
  for (uint64_t i = 2; i <= limit; ++i) {
    if (t.spf[i] != 0) continue;
    t.spf[i] = static_cast<uint32_t>(i);
    if (i > limit / i) continue;
    for (uint64_t j = i * i; j <= limit; j += i)
      if (t.spf[j] == 0) t.spf[j] = static_cast<uint32_t>(i);
  }
  return t;
}

BasePrimes base_primes(uint64_t limit) {
  if (limit > (uint64_t{1} << 32)) throw CapacityError("base_primes: limit cap is 2^32");
  BasePrimes bp;
  bp.limit = limit;
  if (limit < 2) return bp;
  std::vector<uint64_t> bits((limit >> 6) + 1, ~uint64_t{0});
  auto clear = [&](uint64_t n) { bits[n >> 6] &= ~(uint64_t{1} << (n & 63)); };
  auto test = [&](uint64_t n) { return (bits[n >> 6] >> (n & 63)) & 1; };
  for (uint64_t i = 2; i * i <= limit; ++i) {
    if (!test(i)) continue;
    for (uint64_t j = i * i; j <= limit; j += i) clear(j);
  }
  for (uint64_t i = 2; i <= limit; ++i)
    if (test(i)) bp.primes.push_back(i);
  return bp;
}

uint64_t isqrt_u64(uint64_t n) {
  if (n == 0) return 0;
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

namespace {

void check_range(uint64_t lo, uint64_t hi, const BasePrimes& base) {
  if (lo == 0 || lo >= hi) throw DomainError("radical_range: require 1 <= lo < hi");
  if (hi - 1 > kValueCap) throw DomainError("radical_range: range exceeds the value cap");
  if (hi - lo > kMaxSegmentSize)
    throw CapacityError("radical_range: segment width cap is " + std::to_string(kMaxSegmentSize));
  uint64_t root = isqrt_u64(hi - 1);
  if (base.limit < root)
    throw DomainError("radical_range: base primes cover " + std::to_string(base.limit) +
                      ", need " + std::to_string(root));
}

// Walks multiples of each base prime p <= sqrt(hi-1) through [lo, hi),
// reporting (index, p) and dividing p out of work[index]. A residual
// work[index] > 1 afterwards is a single prime above sqrt(hi-1).
template <typename Visit>
void mark_segment(uint64_t lo, uint64_t hi, const BasePrimes& base, std::vector<uint64_t>& work,
                  const Visit& visit) {
  work.resize(hi - lo);
  std::iota(work.begin(), work.end(), lo);
  uint64_t root = isqrt_u64(hi - 1);
  for (uint64_t p : base.primes) {
    if (p > root) break;
    uint64_t start = lo % p == 0 ? lo : lo + (p - lo % p);
    for (uint64_t v = start; v < hi; v += p) {
      size_t i = static_cast<size_t>(v - lo);
      visit(i, p);
      while (work[i] % p == 0) work[i] /= p;
    }
  }
}

}  // namespace

std::vector<uint64_t> radical_range(uint64_t lo, uint64_t hi, const BasePrimes& base) {
  check_range(lo, hi, base);
  std::vector<uint64_t> rad(hi - lo, 1);
  std::vector<uint64_t> work;
  mark_segment(lo, hi, base, work, [&](size_t i, uint64_t p) { rad[i] *= p; });
  for (size_t i = 0; i < rad.size(); ++i)
    if (work[i] > 1) rad[i] *= work[i];
  return rad;
}

std::vector<uint64_t> radical_range(uint64_t lo, uint64_t hi) {
  if (lo == 0 || lo >= hi) throw DomainError("radical_range: require 1 <= lo < hi");
  if (hi - 1 > kValueCap) throw DomainError("radical_range: range exceeds the value cap");
  return radical_range(lo, hi, base_primes(isqrt_u64(hi - 1)));
}

std::vector<PrimeSupport> support_range(uint64_t lo, uint64_t hi, const BasePrimes& base) {
  check_range(lo, hi, base);
  std::vector<PrimeSupport> out(hi - lo);
  std::vector<uint64_t> work;
  mark_segment(lo, hi, base, work, [&](size_t i, uint64_t p) { out[i].primes.push_back(p); });
  // Base primes arrive in increasing order and the residual exceeds them all,
  // so each support is already sorted.
  for (size_t i = 0; i < out.size(); ++i)
    if (work[i] > 1) out[i].primes.push_back(work[i]);
  return out;
}

void window_key_stream(uint64_t lo, uint64_t hi, uint64_t len, const BasePrimes& base,
                       const std::function<void(uint64_t, std::span<const uint64_t>)>& emit) {
  if (lo == 0 || lo >= hi || len == 0)
    throw DomainError("window_key_stream: require 1 <= lo < hi and len >= 1");
  if (hi - 1 > kValueCap - (len - 1))
    throw DomainError("window_key_stream: window exceeds the value cap");
  std::vector<PrimeSupport> supports = support_range(lo, hi + len - 1, base);
  std::vector<uint64_t> buf;
  for (uint64_t n = lo; n < hi; ++n) {
    size_t at = static_cast<size_t>(n - lo);
    if (len == 1) {
      emit(n, supports[at].primes);
      continue;
    }
    buf.clear();
    for (uint64_t j = 0; j < len; ++j)
      buf.insert(buf.end(), supports[at + j].primes.begin(), supports[at + j].primes.end());
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    emit(n, buf);
  }
}

}  // namespace radseq
