#include "radseq/match.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace radseq {
namespace {

void write_u64(std::ostream& out, uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

uint64_t read_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw DomainError("key store: truncated stream");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_vec(std::ostream& out, const std::vector<uint64_t>& v) {
  write_u64(out, v.size());
  for (uint64_t x : v) write_u64(out, x);
}

std::vector<uint64_t> read_vec(std::istream& in) {
  uint64_t size = read_u64(in);
  if (size > (uint64_t{1} << 32)) throw DomainError("key store: implausible group size");
  std::vector<uint64_t> v(size);
  for (auto& x : v) x = read_u64(in);
  return v;
}

}  // namespace

RunResult run_length(uint64_t m, uint64_t n, uint64_t cap) {
  if (m == 0 || m >= n) throw DomainError("run_length: require 1 <= m < n");
  if (cap == 0) throw DomainError("run_length: cap must be positive");
  if (cap - 1 > kValueCap - n) throw DomainError("run_length: window exceeds the value cap");
  for (uint64_t i = 0; i < cap; ++i)
    if (radical(m + i) != radical(n + i)) return RunResult{i, false};
  return RunResult{cap, true};
}

bool verify_pair(uint64_t m, uint64_t n, uint64_t k) {
  if (k == 0) throw DomainError("verify_pair: k must be positive");
  return run_length(m, n, k).length == k;
}

void KeyStore::add(const Fp128& fp, uint64_t n, int role) {
  Group& g = groups_[fp];
  (role == 0 ? g.a : g.b).push_back(n);
  ++entries_;
}

void KeyStore::merge_from(KeyStore&& other) {
  if (groups_.empty()) {
    groups_ = std::move(other.groups_);
  } else {
    for (auto& [fp, g] : other.groups_) {
      Group& mine = groups_[fp];
      mine.a.insert(mine.a.end(), g.a.begin(), g.a.end());
      mine.b.insert(mine.b.end(), g.b.begin(), g.b.end());
    }
    other.groups_.clear();
  }
  entries_ += other.entries_;
  other.entries_ = 0;
}

void KeyStore::save(std::ostream& out) const {
  std::vector<const std::pair<const Fp128, Group>*> items;
  items.reserve(groups_.size());
  for (const auto& kv : groups_) items.push_back(&kv);
  std::sort(items.begin(), items.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  write_u64(out, items.size());
  for (const auto* kv : items) {
    write_u64(out, kv->first.hi);
    write_u64(out, kv->first.lo);
    write_vec(out, kv->second.a);
    write_vec(out, kv->second.b);
  }
}

KeyStore KeyStore::load(std::istream& in) {
  KeyStore store;
  uint64_t count = read_u64(in);
  for (uint64_t i = 0; i < count; ++i) {
    Fp128 fp;
    fp.hi = read_u64(in);
    fp.lo = read_u64(in);
    Group g;
    g.a = read_vec(in);
    g.b = read_vec(in);
    store.entries_ += g.a.size() + g.b.size();
    store.groups_.emplace(fp, std::move(g));
  }
  return store;
}

namespace {

void check_scan(const SegmentPlan& plan, uint64_t window) {
  if (window == 0) throw DomainError("scan: window length must be positive");
  if (plan.lo == 0 || plan.lo >= plan.hi) throw DomainError("scan: require 1 <= lo < hi");
  if (plan.hi - 1 > kValueCap - (window - 1))
    throw DomainError("scan: window exceeds the value cap");
  if (window - 1 >= kMaxSegmentSize || plan.segment_size == 0 ||
      plan.segment_size > kMaxSegmentSize - (window - 1))
    throw CapacityError("scan: segment size plus window must stay within the segment cap");
}

}  // namespace

void scan_run_keys(const SegmentPlan& plan, uint64_t first_seg, uint64_t last_seg, uint64_t k,
                   unsigned threads, const BasePrimes& base, KeyStore& store) {
  check_scan(plan, k);
  if (first_seg >= last_seg) return;
  std::vector<KeyStore> locals(last_seg - first_seg);
  run_segments(plan, first_seg, last_seg, threads, [&](uint64_t i, uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> rads = radical_range(lo, hi + k - 1, base);
    KeyStore& local = locals[i - first_seg];
    for (uint64_t n = lo; n < hi; ++n) {
      Fingerprint fp;
      for (uint64_t j = 0; j < k; ++j) fp.absorb(rads[n - lo + j]);
      local.add(fp.digest(), n, 0);
    }
  });
  for (auto& local : locals) store.merge_from(std::move(local));
}

void scan_window_keys(const SegmentPlan& plan, uint64_t first_seg, uint64_t last_seg, uint64_t k,
                      uint64_t l, unsigned threads, const BasePrimes& base, KeyStore& store) {
  check_scan(plan, std::max(k, l));
  if (k == 0 || l == 0) throw DomainError("scan: window length must be positive");
  if (first_seg >= last_seg) return;
  std::vector<KeyStore> locals(last_seg - first_seg);
  run_segments(plan, first_seg, last_seg, threads, [&](uint64_t i, uint64_t lo, uint64_t hi) {
    KeyStore& local = locals[i - first_seg];
    auto absorb = [](std::span<const uint64_t> primes) {
      Fingerprint fp;
      for (uint64_t p : primes) fp.absorb(p);
      return fp.digest();
    };
    window_key_stream(lo, hi, k, base,
                      [&](uint64_t n, std::span<const uint64_t> s) { local.add(absorb(s), n, 0); });
    if (l != k)
      window_key_stream(lo, hi, l, base,
                        [&](uint64_t n, std::span<const uint64_t> s) { local.add(absorb(s), n, 1); });
  });
  for (auto& local : locals) store.merge_from(std::move(local));
}

std::vector<PairMatch> finalize_run_pairs(const KeyStore& store, uint64_t x, uint64_t k,
                                          uint64_t n_lo, uint64_t n_hi) {
  std::vector<PairMatch> out;
  for (const auto& [fp, g] : store.groups()) {
    if (g.a.size() < 2) continue;
    std::vector<uint64_t> ns = g.a;
    std::sort(ns.begin(), ns.end());
    for (size_t i = 0; i < ns.size(); ++i) {
      for (size_t j = i + 1; j < ns.size(); ++j) {
        if (ns[j] < n_lo || ns[j] >= n_hi) continue;
        RunResult rr = run_length(ns[i], ns[j], x);
        if (rr.length < k) continue;
        out.push_back(PairMatch{ns[i], ns[j], rr.length, rr.truncated});
        if (out.size() > kPairBudget)
          throw CapacityError("finalize_run_pairs: pair budget exceeded, shard the range");
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const PairMatch& a, const PairMatch& b) {
    return a.n != b.n ? a.n < b.n : a.m < b.m;
  });
  return out;
}

std::vector<WindowMatch> finalize_window_matches(const KeyStore& store, uint64_t k, uint64_t l,
                                                 uint64_t n_lo, uint64_t n_hi) {
  std::vector<WindowMatch> out;
  auto confirm = [&](uint64_t m, uint64_t n) {
    PrimeSupport key_m = window_support(m, k);
    if (key_m != window_support(n, l)) return;
    out.push_back(WindowMatch{m, n, k, l, std::move(key_m)});
    if (out.size() > kPairBudget)
      throw CapacityError("finalize_window_matches: pair budget exceeded, shard the range");
  };
  for (const auto& [fp, g] : store.groups()) {
    if (k == l) {
      if (g.a.size() < 2) continue;
      std::vector<uint64_t> ns = g.a;
      std::sort(ns.begin(), ns.end());
      for (size_t i = 0; i < ns.size(); ++i)
        for (size_t j = i + 1; j < ns.size(); ++j)
          if (ns[j] >= n_lo && ns[j] < n_hi) confirm(ns[i], ns[j]);
    } else {
      if (g.a.empty() || g.b.empty()) continue;
      std::vector<uint64_t> ms = g.a, ns = g.b;
      std::sort(ms.begin(), ms.end());
      std::sort(ns.begin(), ns.end());
      for (uint64_t m : ms)
        for (uint64_t n : ns)
          if (m < n && n >= n_lo && n < n_hi) confirm(m, n);
    }
  }
  std::sort(out.begin(), out.end(), [](const WindowMatch& a, const WindowMatch& b) {
    return a.n != b.n ? a.n < b.n : a.m < b.m;
  });
  return out;
}

std::vector<PairMatch> equal_run_pairs(uint64_t x, uint64_t k, unsigned threads) {
  if (x < 2) throw DomainError("equal_run_pairs: x must be at least 2");
  if (k == 0) throw DomainError("equal_run_pairs: k must be positive");
  if (x > kValueCap / 2) throw DomainError("equal_run_pairs: x cap is 2^61 (runs extend to 2x)");
  if (k > kValueCap - x) throw DomainError("equal_run_pairs: window exceeds the value cap");
  BasePrimes base = base_primes(isqrt_u64(x + k - 1));
  SegmentPlan plan{1, x + 1, std::min<uint64_t>(kDefaultSegmentSize, x)};
  KeyStore store;
  scan_run_keys(plan, 0, plan.count(), k, threads, base, store);
  return finalize_run_pairs(store, x, k, 1, x + 1);
}

std::vector<WindowMatch> window_matches(uint64_t x, uint64_t k, uint64_t l, unsigned threads) {
  if (x < 2) throw DomainError("window_matches: x must be at least 2");
  if (k == 0 || l == 0) throw DomainError("window_matches: window lengths must be positive");
  uint64_t w = std::max(k, l);
  if (x > kValueCap || w - 1 > kValueCap - x)
    throw DomainError("window_matches: window exceeds the value cap");
  BasePrimes base = base_primes(isqrt_u64(x + w - 1));
  SegmentPlan plan{1, x + 1, std::min<uint64_t>(kDefaultSegmentSize, x)};
  KeyStore store;
  scan_window_keys(plan, 0, plan.count(), k, l, threads, base, store);
  return finalize_window_matches(store, k, l, 1, x + 1);
}

double window_count_bound(uint64_t x, uint64_t l) {
  if (x < 3) return std::numeric_limits<double>::infinity();
  double lx = std::log(static_cast<double>(x));
  return static_cast<double>(x) *
         std::exp(static_cast<double>(l) * std::log(2.0) * lx / std::log(lx));
}

namespace {

// Divides every listed prime out of v; true when exactly those primes occur.
bool support_strips(mpz_class v, const std::vector<std::pair<uint64_t, uint32_t>>& factors) {
  for (const auto& [p, e] : factors) {
    unsigned long pl = static_cast<unsigned long>(p);
    if (!mpz_divisible_ui_p(v.get_mpz_t(), pl)) return false;
    while (mpz_divisible_ui_p(v.get_mpz_t(), pl))
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), pl);
  }
  return v == 1;
}

}  // namespace

std::vector<FamilyRecord> verify_family(uint32_t k_min, uint32_t k_max) {
  if (k_min < 2 || k_min > k_max || k_max > 64)
    throw DomainError("verify_family: require 2 <= k_min <= k_max <= 64");
  std::vector<FamilyRecord> out;
  for (uint32_t k = k_min; k <= k_max; ++k) {
    uint64_t m64 = (k == 64) ? std::numeric_limits<uint64_t>::max() - 1 : (uint64_t{1} << k) - 2;
    uint64_t next64 = m64 + 1;  // 2^k - 1
    mpz_class m(static_cast<unsigned long>(m64));
    mpz_class n = (mpz_class(1) << k) * m;
    mpz_class n1 = n + 1;
    FamilyRecord rec;
    rec.k = k;
    rec.m = m.get_str();
    rec.n = n.get_str();
    rec.mersenne_factors = prime_factors_u64(next64);
    rec.rad_match = support_strips(n, prime_factors_u64(m64));
    rec.rad_next_match = support_strips(n1, rec.mersenne_factors);
    mpz_class root(static_cast<unsigned long>(next64));
    rec.square_identity = (n1 == root * root);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace radseq
