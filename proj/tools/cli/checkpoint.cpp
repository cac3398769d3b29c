#include "cli/checkpoint.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "cli/cli.hpp"

namespace radseq::cli {
namespace {

constexpr char kMagic[8] = {'R', 'S', 'E', 'Q', 'C', 'K', 'P', '1'};

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

uint64_t get_u64(const std::string& s, size_t at) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  std::string blob(kMagic, sizeof kMagic);
  put_u64(blob, data.config.hi);
  put_u64(blob, data.config.lo);
  put_u64(blob, data.done);
  put_u64(blob, data.out_offset);
  put_u64(blob, data.payload.size());
  blob += data.payload;

  std::string tmp = path + ".tmp";
  FILE* f = std::fopen(tmp.c_str(), "wb");
  if (!f) throw UsageError("cannot write checkpoint: " + tmp);
  bool ok = std::fwrite(blob.data(), 1, blob.size(), f) == blob.size();
  ok = std::fflush(f) == 0 && ok;
  ok = ::fsync(::fileno(f)) == 0 && ok;
  std::fclose(f);
  if (!ok || std::rename(tmp.c_str(), path.c_str()) != 0)
    throw UsageError("cannot write checkpoint: " + path);
}

std::optional<CheckpointData> load_checkpoint(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return std::nullopt;
  std::string blob;
  char buf[1 << 16];
  size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) blob.append(buf, got);
  std::fclose(f);

  constexpr size_t kHeader = sizeof kMagic + 5 * 8;
  if (blob.size() < kHeader || std::memcmp(blob.data(), kMagic, sizeof kMagic) != 0)
    throw UsageError("not a checkpoint file: " + path);
  CheckpointData data;
  data.config.hi = get_u64(blob, 8);
  data.config.lo = get_u64(blob, 16);
  data.done = get_u64(blob, 24);
  data.out_offset = get_u64(blob, 32);
  uint64_t payload_size = get_u64(blob, 40);
  if (blob.size() != kHeader + payload_size)
    throw UsageError("truncated checkpoint file: " + path);
  data.payload = blob.substr(kHeader);
  return data;
}

void remove_checkpoint(const std::string& path) {
  std::error_code ec;
  std::filesystem::remove(path, ec);
}

}  // namespace radseq::cli
