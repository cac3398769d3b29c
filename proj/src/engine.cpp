#include "radseq/engine.hpp"

#include <exception>
#include <thread>
#include <vector>

#include "radseq/errors.hpp"

namespace radseq {

uint64_t SegmentPlan::count() const {
  if (lo >= hi) return 0;
  return (hi - lo + segment_size - 1) / segment_size;
}

std::pair<uint64_t, uint64_t> SegmentPlan::bounds(uint64_t index) const {
  uint64_t a = lo + index * segment_size;
  uint64_t b = std::min(hi, a + segment_size);
  return {a, b};
}

void run_segments(const SegmentPlan& plan, uint64_t first, uint64_t last, unsigned threads,
                  const std::function<void(uint64_t, uint64_t, uint64_t)>& fn) {
  if (first > last || last > plan.count())
    throw DomainError("run_segments: segment window out of range");
  if (first == last) return;
  uint64_t jobs = last - first;
  unsigned workers = static_cast<unsigned>(std::min<uint64_t>(threads ? threads : 1, jobs));
  if (workers <= 1) {
    for (uint64_t i = first; i < last; ++i) {
      auto [a, b] = plan.bounds(i);
      fn(i, a, b);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (uint64_t i = first + w; i < last; i += workers) {
          auto [a, b] = plan.bounds(i);
          fn(i, a, b);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace radseq
