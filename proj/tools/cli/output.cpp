#include "cli/output.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace radseq::cli {

void StreamSink::write(std::string_view s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }

FileSink::FileSink(const std::string& path, std::optional<uint64_t> resume_offset) {
  if (resume_offset) {
    file_ = std::fopen(path.c_str(), "r+b");
    if (!file_) throw UsageError("cannot reopen output file for resume: " + path);
    if (::ftruncate(::fileno(file_), static_cast<off_t>(*resume_offset)) != 0) {
      std::fclose(file_);
      throw UsageError("cannot truncate output file to the checkpointed offset: " + path);
    }
    std::fseek(file_, 0, SEEK_END);
  } else {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw UsageError("cannot open output file: " + path);
  }
}

FileSink::~FileSink() {
  if (file_) std::fclose(file_);
}

void FileSink::write(std::string_view s) {
  if (std::fwrite(s.data(), 1, s.size(), file_) != s.size())
    throw std::runtime_error(std::string("write failed: ") + std::strerror(errno));
}

void FileSink::flush_sync() {
  std::fflush(file_);
  ::fsync(::fileno(file_));
}

uint64_t FileSink::offset() const { return static_cast<uint64_t>(std::ftell(file_)); }

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string join_primes(const std::vector<uint64_t>& primes, char sep) {
  std::string s;
  for (size_t i = 0; i < primes.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(primes[i]);
  }
  return s;
}

std::string json_prime_array(const std::vector<uint64_t>& primes) {
  return "[" + join_primes(primes, ',') + "]";
}

std::string json_factor_array(const std::vector<std::pair<uint64_t, uint32_t>>& factors) {
  std::string s = "[";
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) s += ",";
    s += "[" + std::to_string(factors[i].first) + "," + std::to_string(factors[i].second) + "]";
  }
  return s + "]";
}

std::string factor_list(const std::vector<std::pair<uint64_t, uint32_t>>& factors) {
  std::string s;
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) s += ";";
    s += std::to_string(factors[i].first) + "^" + std::to_string(factors[i].second);
  }
  return s;
}

namespace {

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string sieve_record(uint64_t n, uint64_t rad, Format f) {
  if (f == Format::kCsv) return std::to_string(n) + "," + std::to_string(rad);
  return "{\"n\":" + std::to_string(n) + ",\"rad\":" + std::to_string(rad) + "}";
}

std::string runs_record(const PairMatch& p, Format f) {
  if (f == Format::kCsv)
    return std::to_string(p.m) + "," + std::to_string(p.n) + "," + std::to_string(p.run);
  return "{\"m\":" + std::to_string(p.m) + ",\"n\":" + std::to_string(p.n) +
         ",\"run\":" + std::to_string(p.run) + "}";
}

std::string windows_record(const WindowMatch& w, Format f) {
  if (f == Format::kCsv)
    return std::to_string(w.m) + "," + std::to_string(w.n) + "," + std::to_string(w.k) + "," +
           std::to_string(w.l) + "," + join_primes(w.key.primes, ';');
  return "{\"m\":" + std::to_string(w.m) + ",\"n\":" + std::to_string(w.n) +
         ",\"k\":" + std::to_string(w.k) + ",\"l\":" + std::to_string(w.l) +
         ",\"rad\":" + json_prime_array(w.key.primes) + "}";
}

std::string stormer_record(uint64_t n, Format f) {
  if (f == Format::kCsv) return std::to_string(n);
  return "{\"n\":" + std::to_string(n) + "}";
}

std::string pell_record(const PellSolution& s, Format f) {
  std::string x = s.x.get_str(), y = s.y.get_str(), d = s.d.get_str();
  if (f == Format::kCsv) return d + "," + std::to_string(s.index) + "," + x + "," + y;
  return "{\"d\":" + d + ",\"index\":" + std::to_string(s.index) + ",\"x\":\"" + x +
         "\",\"y\":\"" + y + "\"}";
}

std::string nxy_record(const SmoothCountReport& r, Format f) {
  std::string est = r.estimate ? format_double(*r.estimate) : "";
  std::string ratio = r.ratio ? format_double(*r.ratio) : "";
  if (f == Format::kCsv)
    return std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.exact) + "," +
           est + "," + ratio;
  return "{\"x\":" + std::to_string(r.x) + ",\"y\":" + std::to_string(r.y) +
         ",\"exact\":" + std::to_string(r.exact) + ",\"estimate\":" + (est.empty() ? "null" : est) +
         ",\"ratio\":" + (ratio.empty() ? "null" : ratio) + "}";
}

std::string quality_record(const QualityRecord& q, Format f) {
  if (f == Format::kCsv)
    return std::to_string(q.n) + "," + std::to_string(q.r) + "," + format_double(q.q_classic) +
           "," + format_double(q.merit);
  return "{\"n\":" + std::to_string(q.n) + ",\"r\":" + std::to_string(q.r) +
         ",\"q\":" + format_double(q.q_classic) + ",\"merit\":" + format_double(q.merit) + "}";
}

std::string bounds_record(const ProductBoundReport& rep, const std::optional<AdjacentRadicalMin>& adj,
                          const std::optional<Rational>& ck, Format f) {
  if (f == Format::kCsv) {
    std::string s = std::to_string(rep.n) + "," + std::to_string(rep.k) + "," +
                    bool_str(rep.holds) + "," + factor_list(rep.lhs) + "," + factor_list(rep.rhs);
    s += adj ? "," + std::to_string(adj->offset) + "," + std::to_string(adj->value) : ",,";
    s += ck ? "," + std::to_string(ck->num) + "/" + std::to_string(ck->den) : ",";
    return s;
  }
  std::string s = "{\"n\":" + std::to_string(rep.n) + ",\"k\":" + std::to_string(rep.k) +
                  ",\"holds\":" + bool_str(rep.holds) + ",\"lhs\":" + json_factor_array(rep.lhs) +
                  ",\"rhs\":" + json_factor_array(rep.rhs);
  s += ",\"min_adjacent_i\":" + (adj ? std::to_string(adj->offset) : "null");
  s += ",\"min_adjacent_rad\":" + (adj ? std::to_string(adj->value) : "null");
  s += ",\"c_k\":" + (ck ? "\"" + std::to_string(ck->num) + "/" + std::to_string(ck->den) + "\"" : "null");
  return s + "}";
}

std::string verify_pair_record(uint64_t m, uint64_t n, uint64_t k, bool ok, Format f) {
  if (f == Format::kCsv)
    return std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(k) + "," + bool_str(ok);
  return "{\"m\":" + std::to_string(m) + ",\"n\":" + std::to_string(n) +
         ",\"k\":" + std::to_string(k) + ",\"ok\":" + bool_str(ok) + "}";
}

std::string family_record(const FamilyRecord& r, Format f) {
  if (f == Format::kCsv)
    return std::to_string(r.k) + "," + r.m + "," + r.n + "," + bool_str(r.rad_match) + "," +
           bool_str(r.rad_next_match) + "," + bool_str(r.square_identity) + "," +
           factor_list(r.mersenne_factors);
  return "{\"k\":" + std::to_string(r.k) + ",\"m\":\"" + r.m + "\",\"n\":\"" + r.n +
         "\",\"rad_match\":" + bool_str(r.rad_match) +
         ",\"rad_next_match\":" + bool_str(r.rad_next_match) +
         ",\"square_identity\":" + bool_str(r.square_identity) +
         ",\"mersenne_factors\":" + json_factor_array(r.mersenne_factors) + "}";
}

const char* csv_header(Command c) {
  switch (c) {
    case Command::kSieve:
      return "n,rad";
    case Command::kRuns:
      return "m,n,run";
    case Command::kWindows:
      return "m,n,k,l,rad";
    case Command::kStormer:
      return "n";
    case Command::kPell:
      return "d,index,x,y";
    case Command::kNxy:
      return "x,y,exact,estimate,ratio";
    case Command::kBounds:
      return "n,k,holds,lhs,rhs,min_adjacent_i,min_adjacent_rad,c_k";
    case Command::kQuality:
      return "n,r,q,merit";
    case Command::kVerify:
      return "";  // depends on the mode, resolved in execute
  }
  return "";
}

}  // namespace radseq::cli
