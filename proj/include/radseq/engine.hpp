#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "radseq/sieve.hpp"

namespace radseq {

// Splits the value range [lo, hi) into fixed-width segments. Segment i covers
// [lo + i*segment_size, min(hi, lo + (i+1)*segment_size)).
struct SegmentPlan {
  uint64_t lo = 1;
  uint64_t hi = 2;
  uint64_t segment_size = kDefaultSegmentSize;

  uint64_t count() const;
  std::pair<uint64_t, uint64_t> bounds(uint64_t index) const;
};

// Runs fn(index, seg_lo, seg_hi) for every segment index in [first, last),
// striping indices across `threads` workers. fn must be safe to call
// concurrently on distinct indices. The first worker exception is rethrown.
void run_segments(const SegmentPlan& plan, uint64_t first, uint64_t last, unsigned threads,
                  const std::function<void(uint64_t, uint64_t, uint64_t)>& fn);

}  // namespace radseq
