#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "radseq/fingerprint.hpp"

namespace radseq::cli {

// Resume state for a long scan: which job produced it, how many work units
// are complete, how many output bytes are final (sieve only), and the
// serialized key stores. Private binary format.
struct CheckpointData {
  Fp128 config;
  uint64_t done = 0;
  uint64_t out_offset = 0;
  std::string payload;
};

// Atomic: writes a temp file, fsyncs, renames over the target.
void save_checkpoint(const std::string& path, const CheckpointData& data);

// nullopt when the file does not exist; UsageError when it is not a
// checkpoint or is truncated.
std::optional<CheckpointData> load_checkpoint(const std::string& path);

void remove_checkpoint(const std::string& path);

}  // namespace radseq::cli
