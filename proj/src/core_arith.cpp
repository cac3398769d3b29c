#include "radseq/core_arith.hpp"

#include <algorithm>
#include <numeric>

#include "radseq/sieve.hpp"

namespace radseq {
namespace {

constexpr uint64_t kSharedSpfLimit = uint64_t{1} << 22;
constexpr uint64_t kTrialLimit = 1'000'000;

const SpfTable& shared_spf() {
  static const SpfTable table = build_spf(kSharedSpfLimit);
  return table;
}

const std::vector<uint64_t>& trial_primes() {
  static const std::vector<uint64_t> primes = [] {
    const SpfTable& t = shared_spf();
    std::vector<uint64_t> ps;
    for (uint64_t i = 2; i <= kTrialLimit; ++i)
      if (t.spf[i] == i) ps.push_back(i);
    return ps;
  }();
  return primes;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

bool miller_rabin(uint64_t n) {
  // Deterministic for all 64-bit n with this witness set.
  static constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : kWitnesses) {
    if (a % n == 0) continue;
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Brent cycle finding; may return n on a bad parameter, caller retries with
// the next c.
uint64_t pollard_brent(uint64_t n, uint64_t c) {
  auto step = [&](uint64_t v) { return (mulmod(v, v, n) + c) % n; };
  uint64_t x = 2, y = 2, d = 1, q = 1, saved = 2;
  uint64_t r = 1;
  const uint64_t batch = 128;
  while (d == 1) {
    x = y;
    for (uint64_t i = 0; i < r; ++i) y = step(y);
    for (uint64_t k = 0; k < r && d == 1; k += batch) {
      saved = y;
      uint64_t span = std::min(batch, r - k);
      for (uint64_t i = 0; i < span; ++i) {
        y = step(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      d = std::gcd(q, n);
    }
    r <<= 1;
  }
  if (d == n) {
    do {
      saved = step(saved);
      d = std::gcd(x > saved ? x - saved : saved - x, n);
    } while (d == 1);
  }
  return d;
}

// n > 1 with no prime factor <= kTrialLimit.
void factor_rough(uint64_t n, std::vector<uint64_t>& out) {
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = n;
  for (uint64_t c = 1; d == n; ++c) d = pollard_brent(n, c);
  factor_rough(d, out);
  factor_rough(n / d, out);
}

void append_spf_walk(uint64_t n, std::vector<std::pair<uint64_t, uint32_t>>& out) {
  const SpfTable& t = shared_spf();
  while (n > 1) {
    uint64_t p = t.spf[n];
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  return miller_rabin(n);
}

std::vector<std::pair<uint64_t, uint32_t>> prime_factors_u64(uint64_t n) {
  if (n == 0) throw DomainError("prime_factors_u64: n must be positive");
  std::vector<std::pair<uint64_t, uint32_t>> out;
  if (n == 1) return out;
  if (n <= shared_spf().limit) {
    append_spf_walk(n, out);
    return out;
  }
  uint64_t m = n;
  for (uint64_t p : trial_primes()) {
    if (p * p > m) break;
    if (m % p == 0) {
      uint32_t e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.emplace_back(p, e);
      if (m <= shared_spf().limit) {
        // Remaining factors are all above p; the table walk keeps the order.
        append_spf_walk(m, out);
        return out;
      }
    }
  }
  if (m > 1) {
    if (is_prime_u64(m)) {
      out.emplace_back(m, 1);
    } else {
      std::vector<uint64_t> rough;
      factor_rough(m, rough);
      std::sort(rough.begin(), rough.end());
      for (size_t i = 0; i < rough.size();) {
        size_t j = i;
        while (j < rough.size() && rough[j] == rough[i]) ++j;
        out.emplace_back(rough[i], static_cast<uint32_t>(j - i));
        i = j;
      }
    }
  }
  return out;
}

Factorization factorize(uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > kValueCap) throw DomainError("factorize: n exceeds the 62-bit value cap");
  return Factorization{n, prime_factors_u64(n)};
}

uint64_t radical(uint64_t n) {
  uint64_t r = 1;
  for (const auto& [p, e] : factorize(n).factors) r *= p;
  return r;
}

PrimeSupport radical_support(uint64_t n) {
  PrimeSupport s;
  for (const auto& [p, e] : factorize(n).factors) s.primes.push_back(p);
  return s;
}

std::optional<uint64_t> PrimeSupport::value_if_fits() const {
  unsigned __int128 acc = 1;
  for (uint64_t p : primes) {
    acc *= p;
    if (acc > kValueCap) return std::nullopt;
  }
  return static_cast<uint64_t>(acc);
}

PrimeSupport window_support(uint64_t n, uint64_t len) {
  if (n == 0 || len == 0) throw DomainError("window_support: n and len must be positive");
  if (len - 1 > kValueCap - n) throw DomainError("window_support: window exceeds the value cap");
  PrimeSupport acc = radical_support(n);
  for (uint64_t i = 1; i < len; ++i) {
    PrimeSupport next = radical_support(n + i);
    std::vector<uint64_t> merged;
    merged.reserve(acc.primes.size() + next.primes.size());
    std::set_union(acc.primes.begin(), acc.primes.end(), next.primes.begin(), next.primes.end(),
                   std::back_inserter(merged));
    acc.primes = std::move(merged);
  }
  return acc;
}

PrimeSupport canonical_support(std::vector<uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (uint64_t p : primes)
    if (!is_prime_u64(p)) throw DomainError("canonical_support: " + std::to_string(p) + " is not prime");
  return PrimeSupport{std::move(primes)};
}

std::vector<PrimeSupport> squarefree_divisors(const PrimeSupport& support) {
  size_t k = support.primes.size();
  if (k > 30) throw CapacityError("squarefree_divisors: support size cap is 30 primes");
  std::vector<PrimeSupport> out;
  out.reserve(size_t{1} << k);
  for (uint32_t mask = 0; mask < (uint32_t{1} << k); ++mask) {
    PrimeSupport s;
    for (size_t i = 0; i < k; ++i)
      if (mask & (uint32_t{1} << i)) s.primes.push_back(support.primes[i]);
    out.push_back(std::move(s));
  }
  return out;
}

bool support_subset(const PrimeSupport& a, const PrimeSupport& b) {
  return std::includes(b.primes.begin(), b.primes.end(), a.primes.begin(), a.primes.end());
}

}  // namespace radseq
