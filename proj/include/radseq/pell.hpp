#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "radseq/core_arith.hpp"

namespace radseq {

// Solution of x^2 - d*y^2 = 1 in positive integers; index 1 is fundamental,
// index j is the j-th power of the fundamental solution.
struct PellSolution {
  mpz_class d;
  mpz_class x;
  mpz_class y;
  uint32_t index = 1;
};

// Minimal positive solution, via the continued fraction expansion of sqrt(d).
// Requires d >= 2 and d not a perfect square.
PellSolution fundamental_solution(const mpz_class& d);

// Successor in the solution chain: x' = x1*x + d*y1*y, y' = x1*y + y1*x.
PellSolution next_solution(const PellSolution& fundamental, const PellSolution& current);

// All solutions with x <= x_max, ascending. Empty when the fundamental x
// already exceeds x_max.
std::vector<PellSolution> solutions_up_to(const mpz_class& d, const mpz_class& x_max);

// Candidates n <= x from the single equation X^2 - D*Y^2 = 1, D = product of
// `divisor`: if n(n+1) = D*m^2 then (2n+1, 2m) solves it, so odd solution
// values X <= 2x+1 give candidates n = (X-1)/2. Each candidate is kept only
// after a direct check that support(n(n+1)) is inside q. `divisor` must be a
// nonempty subset of q.
std::vector<uint64_t> stormer_candidates(const PrimeSupport& divisor, const PrimeSupport& q,
                                         uint64_t x);

// All n <= x with support(n(n+1)) inside q, ascending. One Pell equation per
// nonempty squarefree divisor of the product of q. Supports with more than 20
// primes are a CapacityError.
std::vector<uint64_t> consecutive_with_support(const PrimeSupport& q, uint64_t x,
                                               unsigned threads = 1);

// Upper bound 2^omega * (2 + log2(2x+3)) on the candidate count seen by the
// search above, omega = |q|.
double stormer_count_bound(uint32_t omega, uint64_t x);

}  // namespace radseq
