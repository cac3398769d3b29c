#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "radseq/core_arith.hpp"

namespace radseq {

// #{ n <= x : rad(n) <= y }. Requires x >= 1, y >= 1.
uint64_t count_smooth_radicals(uint64_t x, uint64_t y, unsigned threads = 1);

// Smooth-count estimate y * exp(2*sqrt(2v/log v)), v = log(x/y). Defined only
// where log v > 1, i.e. x/y > e^e; DomainError otherwise.
double smooth_count_estimate(uint64_t x, uint64_t y);

struct SmoothCountReport {
  uint64_t x = 0;
  uint64_t y = 0;
  uint64_t exact = 0;
  std::optional<double> estimate;  // absent where the estimate is undefined
  std::optional<double> ratio;     // exact / estimate
};

SmoothCountReport smooth_count_report(uint64_t x, uint64_t y, unsigned threads = 1);

// Exponent-vector comparison of prod_{i<=k} rad(n+i) against
// (prod_{p<=k} p^floor(k/p)) * rad(n(n+1)...(n+k)). Exact; no floating point.
struct ProductBoundReport {
  uint64_t n = 0;
  uint64_t k = 0;
  bool holds = false;
  std::vector<std::pair<uint64_t, uint32_t>> lhs;  // prime -> exponent, sorted
  std::vector<std::pair<uint64_t, uint32_t>> rhs;
};

// Requires n >= 1, k >= 1, n + k <= kValueCap.
ProductBoundReport product_ratio_check(uint64_t n, uint64_t k);

struct QualityRecord {
  uint64_t n = 0;
  uint64_t r = 0;          // rad(n(n+1))
  double q_classic = 0.0;  // log(n+1) / log r
  double merit = 0.0;      // log(n+1) / (r^(1/3) * (log r)^3)
};

// Requires n >= 2 and rad(n(n+1)) <= kValueCap.
QualityRecord quality(uint64_t n);

struct QualityScanResult {
  std::vector<QualityRecord> record_setters;  // strict q_classic improvements, ascending n
  QualityRecord best;
};

// Serial scan of 2 <= n <= n_max. Requires 2 <= n_max < 2^31 so r fits.
QualityScanResult quality_scan(uint64_t n_max);

struct Rational {
  uint64_t num = 0;
  uint64_t den = 1;
};

// Exact window exponent constant: 2/k for even k, 2/(k-1) for odd k, reduced.
// Requires k >= 2.
Rational window_exponent_constant(uint64_t k);

struct AdjacentRadicalMin {
  uint64_t offset = 0;  // i with the smallest rad((n+i)(n+i+1)), smallest i on ties
  uint64_t value = 0;
};

// Minimum of rad((n+i)(n+i+1)) over 0 <= i <= k-2. Requires k >= 2 and
// n + k - 1 <= kValueCap.
AdjacentRadicalMin min_adjacent_radical(uint64_t n, uint64_t k);

}  // namespace radseq
