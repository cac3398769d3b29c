#pragma once

#include <cstddef>
#include <cstdint>

namespace radseq {

struct Fp128 {
  uint64_t hi = 0;
  uint64_t lo = 0;

  friend bool operator==(const Fp128&, const Fp128&) = default;
  friend bool operator<(const Fp128& a, const Fp128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

struct Fp128Hash {
  size_t operator()(const Fp128& f) const noexcept {
    return static_cast<size_t>(f.hi ^ (f.lo * 0x9e3779b97f4a7c15ULL));
  }
};

// 128-bit order-sensitive fingerprint of a uint64 sequence. Used only to group
// candidate keys; every reported match is re-verified by recomputation, so a
// collision costs time, never correctness.
class Fingerprint {
 public:
  void absorb(uint64_t v) {
    a_ = mix(a_ ^ (v + 0x9e3779b97f4a7c15ULL + (a_ << 6) + (a_ >> 2)));
    b_ = mix(b_ + rotl(v, 23) + 0x165667b19e3779f9ULL);
  }

  Fp128 digest() const { return Fp128{mix(a_ ^ 0xff51afd7ed558ccdULL), mix(b_ + 0xc4ceb9fe1a85ec53ULL)}; }

 private:
  static uint64_t rotl(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t a_ = 0x6a09e667f3bcc908ULL;
  uint64_t b_ = 0xbb67ae8584caa73bULL;
};

}  // namespace radseq
