#pragma once

#include <stdexcept>
#include <string>

namespace radseq {

// Input outside a function's documented domain (zero, overflow past the value
// cap, squares passed to the Pell solver, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Request is well-formed but exceeds a documented resource limit (segment
// width, support size, pair budget). Shrink the request or shard it.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace radseq
