#include "radseq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "radseq/engine.hpp"
#include "radseq/sieve.hpp"

namespace radseq {

uint64_t count_smooth_radicals(uint64_t x, uint64_t y, unsigned threads) {
  if (x == 0 || y == 0) throw DomainError("count_smooth_radicals: x and y must be positive");
  if (x > kValueCap) throw DomainError("count_smooth_radicals: x exceeds the value cap");
  BasePrimes base = base_primes(isqrt_u64(x));
  SegmentPlan plan{1, x + 1, kDefaultSegmentSize};
  std::vector<uint64_t> per(plan.count(), 0);
  run_segments(plan, 0, plan.count(), threads, [&](uint64_t i, uint64_t lo, uint64_t hi) {
    uint64_t c = 0;
    for (uint64_t r : radical_range(lo, hi, base))
      if (r <= y) ++c;
    per[i] = c;
  });
  return std::accumulate(per.begin(), per.end(), uint64_t{0});
}

double smooth_count_estimate(uint64_t x, uint64_t y) {
  if (x == 0 || y == 0) throw DomainError("smooth_count_estimate: x and y must be positive");
  double v = std::log(static_cast<double>(x) / static_cast<double>(y));
  // The asymptotic needs log v > 1; below that the exponent degenerates.
  if (!(v > 0.0) || !(std::log(v) > 1.0))
    throw DomainError("smooth_count_estimate: defined only for log(log(x/y)) > 1");
  return static_cast<double>(y) * std::exp(2.0 * std::sqrt(2.0 * v / std::log(v)));
}

SmoothCountReport smooth_count_report(uint64_t x, uint64_t y, unsigned threads) {
  SmoothCountReport rep;
  rep.x = x;
  rep.y = y;
  rep.exact = count_smooth_radicals(x, y, threads);
  try {
    rep.estimate = smooth_count_estimate(x, y);
    rep.ratio = static_cast<double>(rep.exact) / *rep.estimate;
  } catch (const DomainError&) {
  }
  return rep;
}

ProductBoundReport product_ratio_check(uint64_t n, uint64_t k) {
  if (n == 0 || k == 0) throw DomainError("product_ratio_check: n and k must be positive");
  if (k > kValueCap - n) throw DomainError("product_ratio_check: window exceeds the value cap");
  std::map<uint64_t, uint32_t> lhs, rhs;
  for (uint64_t i = 0; i <= k; ++i)
    for (const auto& [p, e] : factorize(n + i).factors) lhs[p] += 1;
  for (uint64_t p = 2; p <= k; ++p)
    if (is_prime_u64(p)) rhs[p] += static_cast<uint32_t>(k / p);
  for (uint64_t p : window_support(n, k + 1).primes) rhs[p] += 1;
  ProductBoundReport rep;
  rep.n = n;
  rep.k = k;
  rep.holds = true;
  for (const auto& [p, e] : lhs) {
    auto it = rhs.find(p);
    if (it == rhs.end() || it->second < e) {
      rep.holds = false;
      break;
    }
  }
  rep.lhs.assign(lhs.begin(), lhs.end());
  rep.rhs.assign(rhs.begin(), rhs.end());
  return rep;
}

QualityRecord quality(uint64_t n) {
  if (n < 2) throw DomainError("quality: n must be at least 2");
  if (n > kValueCap - 1) throw DomainError("quality: n exceeds the value cap");
  // n and n+1 are coprime, so rad(n(n+1)) = rad(n) * rad(n+1).
  unsigned __int128 r = static_cast<unsigned __int128>(radical(n)) * radical(n + 1);
  if (r > kValueCap) throw DomainError("quality: rad(n(n+1)) exceeds the value cap");
  QualityRecord rec;
  rec.n = n;
  rec.r = static_cast<uint64_t>(r);
  double log_r = std::log(static_cast<double>(rec.r));
  double log_n1 = std::log(static_cast<double>(n) + 1.0);
  rec.q_classic = log_n1 / log_r;
  rec.merit = log_n1 / (std::cbrt(static_cast<double>(rec.r)) * std::pow(log_r, 3.0));
  return rec;
}

QualityScanResult quality_scan(uint64_t n_max) {
  if (n_max < 2) throw DomainError("quality_scan: n_max must be at least 2");
  if (n_max >= (uint64_t{1} << 31))
    throw DomainError("quality_scan: n_max cap is 2^31 so the radical product fits");
  BasePrimes base = base_primes(isqrt_u64(n_max + 1));
  QualityScanResult result;
  double best_q = 0.0;
  for (uint64_t lo = 2; lo <= n_max; lo += kDefaultSegmentSize) {
    uint64_t hi = std::min(n_max + 1, lo + kDefaultSegmentSize);
    std::vector<uint64_t> rads = radical_range(lo, hi + 1, base);
    for (uint64_t n = lo; n < hi; ++n) {
      uint64_t r = rads[n - lo] * rads[n - lo + 1];
      double q = std::log(static_cast<double>(n) + 1.0) / std::log(static_cast<double>(r));
      if (q > best_q) {
        best_q = q;
        QualityRecord rec;
        rec.n = n;
        rec.r = r;
        rec.q_classic = q;
        double log_r = std::log(static_cast<double>(r));
        rec.merit = std::log(static_cast<double>(n) + 1.0) /
                    (std::cbrt(static_cast<double>(r)) * std::pow(log_r, 3.0));
        result.record_setters.push_back(rec);
      }
    }
  }
  result.best = result.record_setters.back();
  return result;
}

Rational window_exponent_constant(uint64_t k) {
  if (k < 2) throw DomainError("window_exponent_constant: k must be at least 2");
  uint64_t den = (k % 2 == 0) ? k : k - 1;
  uint64_t g = std::gcd(uint64_t{2}, den);
  return Rational{2 / g, den / g};
}

AdjacentRadicalMin min_adjacent_radical(uint64_t n, uint64_t k) {
  if (n == 0) throw DomainError("min_adjacent_radical: n must be positive");
  if (k < 2) throw DomainError("min_adjacent_radical: k must be at least 2");
  if (k - 1 > kValueCap - n) throw DomainError("min_adjacent_radical: window exceeds the value cap");
  unsigned __int128 best = 0;
  uint64_t best_i = 0;
  uint64_t prev_rad = radical(n);
  for (uint64_t i = 0; i + 1 < k; ++i) {
    uint64_t next_rad = radical(n + i + 1);
    unsigned __int128 prod = static_cast<unsigned __int128>(prev_rad) * next_rad;
    if (i == 0 || prod < best) {
      best = prod;
      best_i = i;
    }
    prev_rad = next_rad;
  }
  if (best > kValueCap)
    throw DomainError("min_adjacent_radical: minimum exceeds the value cap");
  return AdjacentRadicalMin{best_i, static_cast<uint64_t>(best)};
}

}  // namespace radseq
