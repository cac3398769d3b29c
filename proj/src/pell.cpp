#include "radseq/pell.hpp"

#include <algorithm>
#include <cmath>

#include "radseq/engine.hpp"

namespace radseq {

PellSolution fundamental_solution(const mpz_class& d) {
  if (d < 2) throw DomainError("fundamental_solution: D must be at least 2");
  if (mpz_perfect_square_p(d.get_mpz_t()))
    throw DomainError("fundamental_solution: D must not be a perfect square");
  mpz_class a0;
  mpz_sqrt(a0.get_mpz_t(), d.get_mpz_t());
  // Continued fraction of sqrt(D); the first convergent p/q with
  // p^2 - d*q^2 = 1 is the minimal solution.
  mpz_class m = 0, den = 1, a = a0;
  mpz_class p_prev = 1, p = a0, q_prev = 0, q = 1;
  constexpr int kPeriodGuard = 10'000'000;
  for (int it = 0; it < kPeriodGuard; ++it) {
    m = a * den - m;
    den = (d - m * m) / den;
    a = (a0 + m) / den;
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = q_next;
    if (p * p - d * q * q == 1) return PellSolution{d, p, q, 1};
  }
  throw CapacityError("fundamental_solution: continued fraction period guard exceeded");
}

PellSolution next_solution(const PellSolution& fundamental, const PellSolution& current) {
  PellSolution next;
  next.d = current.d;
  next.x = fundamental.x * current.x + fundamental.d * fundamental.y * current.y;
  next.y = fundamental.x * current.y + fundamental.y * current.x;
  next.index = current.index + 1;
  return next;
}

std::vector<PellSolution> solutions_up_to(const mpz_class& d, const mpz_class& x_max) {
  PellSolution fundamental = fundamental_solution(d);
  std::vector<PellSolution> out;
  PellSolution cur = fundamental;
  while (cur.x <= x_max) {
    out.push_back(cur);
    cur = next_solution(fundamental, cur);
  }
  return out;
}

std::vector<uint64_t> stormer_candidates(const PrimeSupport& divisor, const PrimeSupport& q,
                                         uint64_t x) {
  if (divisor.primes.empty())
    throw DomainError("stormer_candidates: divisor must be a nonempty subset");
  if (!support_subset(divisor, q))
    throw DomainError("stormer_candidates: divisor must be a subset of the support");
  if (x == 0) throw DomainError("stormer_candidates: x must be positive");
  if (x > kValueCap - 1) throw DomainError("stormer_candidates: x exceeds the value cap");
  mpz_class d = 1;
  for (uint64_t p : divisor.primes) d *= static_cast<unsigned long>(p);
  mpz_class x_bound = 2 * mpz_class(static_cast<unsigned long>(x)) + 1;
  std::vector<uint64_t> out;
  for (const PellSolution& s : solutions_up_to(d, x_bound)) {
    if (!mpz_odd_p(s.x.get_mpz_t())) continue;
    mpz_class half = (s.x - 1) / 2;
    if (half < 1) continue;
    uint64_t n = static_cast<uint64_t>(half.get_ui());
    if (support_subset(window_support(n, 2), q)) out.push_back(n);
  }
  return out;
}

std::vector<uint64_t> consecutive_with_support(const PrimeSupport& q, uint64_t x,
                                               unsigned threads) {
  if (x == 0) throw DomainError("consecutive_with_support: x must be positive");
  if (x > kValueCap - 1) throw DomainError("consecutive_with_support: x exceeds the value cap");
  if (q.primes.size() > 20)
    throw CapacityError("consecutive_with_support: support size cap is 20 primes");
  for (size_t i = 0; i < q.primes.size(); ++i) {
    bool sorted = i == 0 || q.primes[i - 1] < q.primes[i];
    if (!sorted || !is_prime_u64(q.primes[i]))
      throw DomainError("consecutive_with_support: support must be sorted distinct primes");
  }
  std::vector<PrimeSupport> divisors = squarefree_divisors(q);
  divisors.erase(divisors.begin());  // drop the empty divisor
  if (divisors.empty()) return {};
  std::vector<std::vector<uint64_t>> per(divisors.size());
  SegmentPlan plan{0, divisors.size(), 1};
  run_segments(plan, 0, divisors.size(), threads,
               [&](uint64_t i, uint64_t, uint64_t) { per[i] = stormer_candidates(divisors[i], q, x); });
  std::vector<uint64_t> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double stormer_count_bound(uint32_t omega, uint64_t x) {
  return std::ldexp(1.0, static_cast<int>(omega)) *
         (2.0 + std::log2(2.0 * static_cast<double>(x) + 3.0));
}

}  // namespace radseq
