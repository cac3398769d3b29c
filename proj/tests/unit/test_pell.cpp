#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "radseq/pell.hpp"

using namespace radseq;

namespace {

// Minimal solution by brute force over x, for small d only.
std::optional<std::pair<uint64_t, uint64_t>> brute_fundamental(uint64_t d, uint64_t x_max) {
  for (uint64_t x = 2; x <= x_max; ++x) {
    unsigned __int128 rhs = static_cast<unsigned __int128>(x) * x - 1;
    if (rhs % d != 0) continue;
    unsigned __int128 y2 = rhs / d;
    uint64_t y = static_cast<uint64_t>(std::sqrt(static_cast<double>(y2)));
    while (static_cast<unsigned __int128>(y) * y > y2) --y;
    while (static_cast<unsigned __int128>(y + 1) * (y + 1) <= y2) ++y;
    if (static_cast<unsigned __int128>(y) * y == y2 && y > 0) return std::make_pair(x, y);
  }
  return std::nullopt;
}

// All n <= x with support(n(n+1)) inside q, by direct factorization.
std::vector<uint64_t> brute_consecutive(const PrimeSupport& q, uint64_t x) {
  std::vector<uint64_t> out;
  for (uint64_t n = 1; n <= x; ++n)
    if (support_subset(window_support(n, 2), q)) out.push_back(n);
  return out;
}

}  // namespace

TEST_CASE("fundamental_solution known values") {
  auto check = [](uint64_t d, const char* x, const char* y) {
    PellSolution s = fundamental_solution(d);
    CHECK(s.x == mpz_class(x));
    CHECK(s.y == mpz_class(y));
    CHECK(s.index == 1);
    CHECK(s.x * s.x - s.d * s.y * s.y == 1);
  };
  check(2, "3", "2");
  check(3, "2", "1");
  check(5, "9", "4");
  check(6, "5", "2");
  check(7, "8", "3");
  check(61, "1766319049", "226153980");
  check(109, "158070671986249", "15140424455100");
}

TEST_CASE("fundamental_solution accepts nonsquarefree d") {
  PellSolution s = fundamental_solution(8);
  CHECK(s.x == 3);
  CHECK(s.y == 1);
}

TEST_CASE("fundamental_solution rejects bad d") {
  CHECK_THROWS_AS(fundamental_solution(0), DomainError);
  CHECK_THROWS_AS(fundamental_solution(1), DomainError);
  CHECK_THROWS_AS(fundamental_solution(4), DomainError);
  CHECK_THROWS_AS(fundamental_solution(49), DomainError);
  CHECK_THROWS_AS(fundamental_solution(mpz_class("1000000000000000000000000")), DomainError);
}

TEST_CASE("fundamental_solution is minimal against brute force") {
  for (uint64_t d = 2; d <= 50; ++d) {
    if (mpz_perfect_square_p(mpz_class(static_cast<unsigned long>(d)).get_mpz_t())) continue;
    auto brute = brute_fundamental(d, 100000);
    REQUIRE(brute.has_value());
    PellSolution s = fundamental_solution(d);
    CHECK(s.x == static_cast<unsigned long>(brute->first));
    CHECK(s.y == static_cast<unsigned long>(brute->second));
  }
}

TEST_CASE("solutions_up_to lists the solution chain") {
  auto xs = [](const std::vector<PellSolution>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.x.get_str());
    return out;
  };
  CHECK(xs(solutions_up_to(2, 100)) == std::vector<std::string>{"3", "17", "99"});
  CHECK(xs(solutions_up_to(5, 1'000'000)) ==
        std::vector<std::string>{"9", "161", "2889", "51841", "930249"});
  CHECK(solutions_up_to(3, 1).empty());
}

TEST_CASE("solution chain satisfies the identity and the recurrence") {
  for (uint64_t d : {2ULL, 13ULL, 61ULL, 313ULL}) {
    mpz_class big("1000000000000000000000000000000");
    auto sols = solutions_up_to(d, big);
    REQUIRE(!sols.empty());
    for (size_t i = 0; i < sols.size(); ++i) {
      CHECK(sols[i].x * sols[i].x - sols[i].d * sols[i].y * sols[i].y == 1);
      CHECK(sols[i].index == i + 1);
      if (i > 0) {
        CHECK(sols[i].x == sols[0].x * sols[i - 1].x + sols[0].d * sols[0].y * sols[i - 1].y);
        CHECK(sols[i].y == sols[0].x * sols[i - 1].y + sols[0].y * sols[i - 1].x);
        CHECK(sols[i].x > sols[i - 1].x);
      }
    }
  }
}

TEST_CASE("consecutive_with_support examples") {
  CHECK(consecutive_with_support(canonical_support({2, 3}), 100) ==
        std::vector<uint64_t>{1, 2, 3, 8});
  CHECK(consecutive_with_support(canonical_support({3, 5}), 1'000'000).empty());
  auto got = consecutive_with_support(canonical_support({2, 3, 5}), 10000);
  for (uint64_t n : {1, 2, 3, 4, 5, 8, 9, 15, 24, 80})
    CHECK(std::find(got.begin(), got.end(), n) != got.end());
  CHECK(consecutive_with_support(PrimeSupport{}, 100).empty());
}

TEST_CASE("consecutive_with_support equals brute force over subset supports") {
  std::vector<uint64_t> base{2, 3, 5, 7};
  for (uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<uint64_t> primes;
    for (size_t i = 0; i < base.size(); ++i)
      if (mask & (1u << i)) primes.push_back(base[i]);
    PrimeSupport q{primes};
    CHECK(consecutive_with_support(q, 10000) == brute_consecutive(q, 10000));
  }
}

TEST_CASE("consecutive_with_support is thread independent") {
  PrimeSupport q = canonical_support({2, 3, 5, 7, 11});
  auto one = consecutive_with_support(q, 50000, 1);
  auto four = consecutive_with_support(q, 50000, 4);
  CHECK(one == four);
  CHECK(std::is_sorted(one.begin(), one.end()));
  CHECK(std::adjacent_find(one.begin(), one.end()) == one.end());
}

TEST_CASE("stormer_candidates covers each divisor") {
  PrimeSupport q = canonical_support({2, 3});
  // D = 2: X chain 3, 17, 99, ... gives n = 1, 8 within bound.
  auto c2 = stormer_candidates(canonical_support({2}), q, 100);
  CHECK(c2 == std::vector<uint64_t>{1, 8});
  auto c3 = stormer_candidates(canonical_support({3}), q, 100);
  CHECK(c3 == std::vector<uint64_t>{3});
  auto c6 = stormer_candidates(canonical_support({2, 3}), q, 100);
  CHECK(c6 == std::vector<uint64_t>{2});
  CHECK_THROWS_AS(stormer_candidates(PrimeSupport{}, q, 100), DomainError);
  CHECK_THROWS_AS(stormer_candidates(canonical_support({5}), q, 100), DomainError);
}

TEST_CASE("candidate count stays under the stated bound") {
  PrimeSupport q = canonical_support({2, 3, 5, 7, 11});
  uint64_t x = 100000;
  uint64_t candidates = 0;
  auto divisors = squarefree_divisors(q);
  for (size_t i = 1; i < divisors.size(); ++i) {
    mpz_class d = 1;
    for (uint64_t p : divisors[i].primes) d *= static_cast<unsigned long>(p);
    candidates += solutions_up_to(d, 2 * mpz_class(static_cast<unsigned long>(x)) + 1).size();
  }
  CHECK(static_cast<double>(candidates) <= stormer_count_bound(5, x));
}

TEST_CASE("support size capacity") {
  std::vector<uint64_t> many;
  for (uint64_t v = 2; many.size() < 21; ++v)
    if (is_prime_u64(v)) many.push_back(v);
  CHECK_THROWS_AS(consecutive_with_support(canonical_support(many), 100), CapacityError);
}
