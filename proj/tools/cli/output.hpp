#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cli/cli.hpp"
#include "radseq/match.hpp"
#include "radseq/pell.hpp"
#include "radseq/stats.hpp"

namespace radseq::cli {

// Record destination. The file variant knows its byte offset and can fsync,
// which checkpointed sieve output needs for truncate-on-resume.
class Sink {
 public:
  virtual ~Sink() = default;
  virtual void write(std::string_view s) = 0;
  virtual void flush_sync() {}
  virtual uint64_t offset() const { return 0; }
};

class StreamSink : public Sink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}
  void write(std::string_view s) override;

 private:
  std::ostream& out_;
};

class FileSink : public Sink {
 public:
  // Fresh file, or an existing one truncated back to resume_offset.
  FileSink(const std::string& path, std::optional<uint64_t> resume_offset);
  ~FileSink() override;
  void write(std::string_view s) override;
  void flush_sync() override;
  uint64_t offset() const override;

 private:
  FILE* file_ = nullptr;
};

// Fixed six-significant-digit formatting so records are byte-stable.
std::string format_double(double v);

std::string join_primes(const std::vector<uint64_t>& primes, char sep);
std::string json_prime_array(const std::vector<uint64_t>& primes);
std::string json_factor_array(const std::vector<std::pair<uint64_t, uint32_t>>& factors);
std::string factor_list(const std::vector<std::pair<uint64_t, uint32_t>>& factors);  // "3^1;7^2"

std::string sieve_record(uint64_t n, uint64_t rad, Format f);
std::string runs_record(const PairMatch& p, Format f);
std::string windows_record(const WindowMatch& w, Format f);
std::string stormer_record(uint64_t n, Format f);
std::string pell_record(const PellSolution& s, Format f);
std::string nxy_record(const SmoothCountReport& r, Format f);
std::string quality_record(const QualityRecord& q, Format f);
std::string bounds_record(const ProductBoundReport& rep, const std::optional<AdjacentRadicalMin>& adj,
                          const std::optional<Rational>& ck, Format f);
std::string verify_pair_record(uint64_t m, uint64_t n, uint64_t k, bool ok, Format f);
std::string family_record(const FamilyRecord& r, Format f);

const char* csv_header(Command c);

}  // namespace radseq::cli
