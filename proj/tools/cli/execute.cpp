#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "cli/checkpoint.hpp"
#include "cli/cli.hpp"
#include "cli/output.hpp"
#include "radseq/engine.hpp"
#include "radseq/match.hpp"
#include "radseq/pell.hpp"
#include "radseq/sieve.hpp"
#include "radseq/stats.hpp"

namespace radseq::cli {
namespace {

using Clock = std::chrono::steady_clock;

int64_t elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

// Doubles in summaries: fixed precision, "null" where undefined.
std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

class Output {
 public:
  Output(const JobConfig& cfg, std::ostream& out, std::ostream& err,
         std::optional<uint64_t> resume = std::nullopt)
      : fmt_(cfg.format), err_(err) {
    if (!cfg.out_path.empty())
      sink_ = std::make_unique<FileSink>(cfg.out_path, resume);
    else
      sink_ = std::make_unique<StreamSink>(out);
  }

  void header(const std::string& h) {
    if (fmt_ == Format::kCsv && !h.empty()) raw(h + "\n");
  }
  void line(const std::string& record) { raw(record + "\n"); }
  void raw(std::string_view s) { sink_->write(s); }

  // The summary goes on the record stream for jsonl; for csv it goes to
  // stderr so the body stays uniform rows.
  void summary(const std::string& json) {
    if (fmt_ == Format::kJsonl)
      raw(json + "\n");
    else
      err_ << json << "\n";
  }

  Sink& sink() { return *sink_; }

 private:
  Format fmt_;
  std::ostream& err_;
  std::unique_ptr<Sink> sink_;
};

Fp128 config_fingerprint(const JobConfig& cfg) {
  Fingerprint fp;
  fp.absorb(static_cast<uint64_t>(cfg.command));
  fp.absorb(static_cast<uint64_t>(cfg.format));
  fp.absorb(cfg.segment_size);
  fp.absorb(cfg.limit);
  fp.absorb(cfg.k);
  fp.absorb(cfg.l);
  fp.absorb(cfg.lo);
  fp.absorb(cfg.hi);
  fp.absorb(cfg.primes.size());
  for (uint64_t p : cfg.primes) fp.absorb(p);
  return fp.digest();
}

// Loads resume state when --checkpoint names an existing file. The config
// fingerprint must match: resuming under different parameters would silently
// produce wrong output.
std::optional<CheckpointData> load_resume(const JobConfig& cfg, const Fp128& fp,
                                          std::ostream& err) {
  if (cfg.checkpoint_path.empty()) return std::nullopt;
  auto ck = load_checkpoint(cfg.checkpoint_path);
  if (!ck) return std::nullopt;
  if (!(ck->config == fp))
    throw UsageError("checkpoint belongs to a different job configuration: " + cfg.checkpoint_path);
  err << "resuming from " << cfg.checkpoint_path << " at " << ck->done << " work units\n";
  return ck;
}

// Wave loop shared by the scan commands: process `threads` work units, write
// a checkpoint, honor --stop-after. Returns 0 on completion, 3 on early stop.
int checkpointed_waves(const JobConfig& cfg, uint64_t total, const Fp128& fp, uint64_t& done,
                       const std::function<void(uint64_t, uint64_t)>& wave,
                       const std::function<std::string()>& state, std::ostream& err) {
  while (done < total) {
    uint64_t wave_end = std::min<uint64_t>(total, done + std::max(1u, cfg.threads));
    wave(done, wave_end);
    done = wave_end;
    if (!cfg.checkpoint_path.empty())
      save_checkpoint(cfg.checkpoint_path, CheckpointData{fp, done, 0, state()});
    if (cfg.verbose) err << "progress " << done << "/" << total << " work units\n";
    if (cfg.stop_after != 0 && done >= cfg.stop_after && done < total) {
      err << "stopped after " << done << " of " << total << " work units\n";
      return 3;
    }
  }
  return 0;
}

std::string ser_u64_vec(const std::vector<uint64_t>& v) {
  std::string s;
  auto put = [&](uint64_t x) {
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>(x >> (8 * i)));
  };
  put(v.size());
  for (uint64_t x : v) put(x);
  return s;
}

std::vector<uint64_t> deser_u64_vec(const std::string& s) {
  auto get = [&](size_t at) {
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
      x |= static_cast<uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
    return x;
  };
  if (s.size() < 8) throw UsageError("corrupt checkpoint payload");
  uint64_t count = get(0);
  if (s.size() != 8 + 8 * count) throw UsageError("corrupt checkpoint payload");
  std::vector<uint64_t> v(count);
  for (uint64_t i = 0; i < count; ++i) v[i] = get(8 + 8 * i);
  return v;
}

int run_sieve(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.hi - 1 > kValueCap) throw DomainError("sieve: hi exceeds the value cap");
  SegmentPlan plan{cfg.lo, cfg.hi, cfg.segment_size};
  uint64_t total = plan.count();
  Fp128 fp = config_fingerprint(cfg);
  uint64_t done = 0;
  std::optional<uint64_t> resume_offset;
  if (auto ck = load_resume(cfg, fp, err)) {
    done = ck->done;
    resume_offset = ck->out_offset;
  }
  Output o(cfg, out, err, resume_offset);
  if (done == 0) o.header(csv_header(Command::kSieve));
  auto t0 = Clock::now();
  BasePrimes base = base_primes(isqrt_u64(cfg.hi - 1));
  while (done < total) {
    uint64_t wave_end = std::min<uint64_t>(total, done + std::max(1u, cfg.threads));
    std::vector<std::string> bufs(wave_end - done);
    run_segments(plan, done, wave_end, cfg.threads, [&](uint64_t i, uint64_t a, uint64_t b) {
      std::vector<uint64_t> rads = radical_range(a, b, base);
      std::string& s = bufs[i - done];
      for (uint64_t v = a; v < b; ++v) {
        s += sieve_record(v, rads[v - a], cfg.format);
        s += '\n';
      }
    });
    for (const std::string& s : bufs) o.raw(s);
    done = wave_end;
    if (!cfg.checkpoint_path.empty()) {
      o.sink().flush_sync();
      save_checkpoint(cfg.checkpoint_path, CheckpointData{fp, done, o.sink().offset(), ""});
    }
    if (cfg.verbose) err << "progress " << done << "/" << total << " segments\n";
    if (cfg.stop_after != 0 && done >= cfg.stop_after && done < total) {
      err << "stopped after " << done << " of " << total << " segments\n";
      return 3;
    }
  }
  o.summary("{\"summary\":\"sieve\",\"lo\":" + std::to_string(cfg.lo) +
            ",\"hi\":" + std::to_string(cfg.hi) +
            ",\"records\":" + std::to_string(cfg.hi - cfg.lo) + "}");
  err << "elapsed_ms=" << elapsed_ms(t0) << "\n";
  if (!cfg.checkpoint_path.empty()) remove_checkpoint(cfg.checkpoint_path);
  return 0;
}

int run_runs(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.limit > kValueCap / 2) throw DomainError("runs: limit cap is 2^61, runs extend to 2x");
  if (cfg.k > kValueCap - cfg.limit) throw DomainError("runs: window exceeds the value cap");
  SegmentPlan plan{1, cfg.limit + 1, cfg.segment_size};
  Fp128 fp = config_fingerprint(cfg);
  uint64_t done = 0;
  KeyStore store;
  if (auto ck = load_resume(cfg, fp, err)) {
    done = ck->done;
    std::istringstream payload(ck->payload);
    store = KeyStore::load(payload);
  }
  auto t0 = Clock::now();
  BasePrimes base = base_primes(isqrt_u64(cfg.limit + cfg.k - 1));
  int rc = checkpointed_waves(
      cfg, plan.count(), fp, done,
      [&](uint64_t a, uint64_t b) { scan_run_keys(plan, a, b, cfg.k, cfg.threads, base, store); },
      [&] {
        std::ostringstream payload;
        store.save(payload);
        return payload.str();
      },
      err);
  if (rc != 0) return rc;
  std::vector<PairMatch> pairs = finalize_run_pairs(store, cfg.limit, cfg.k, cfg.lo, cfg.hi);
  Output o(cfg, out, err);
  o.header(csv_header(Command::kRuns));
  for (const PairMatch& p : pairs) o.line(runs_record(p, cfg.format));
  double lx = std::log(static_cast<double>(cfg.limit));
  double llx = std::log(lx);
  bool defined = cfg.limit >= 3 && llx > 0.0;
  std::string b32 = defined ? json_number(std::pow(lx, 1.5) / std::pow(llx, 4.5)) : "null";
  std::string b3 = defined ? json_number(std::pow(lx, 3.0) / std::pow(llx, 4.5)) : "null";
  o.summary("{\"summary\":\"runs\",\"limit\":" + std::to_string(cfg.limit) +
            ",\"k\":" + std::to_string(cfg.k) + ",\"lo\":" + std::to_string(cfg.lo) +
            ",\"hi\":" + std::to_string(cfg.hi) + ",\"pairs\":" + std::to_string(pairs.size()) +
            ",\"k_bound_pow32\":" + b32 + ",\"k_bound_pow3\":" + b3 + "}");
  err << "elapsed_ms=" << elapsed_ms(t0) << "\n";
  if (!cfg.checkpoint_path.empty()) remove_checkpoint(cfg.checkpoint_path);
  return 0;
}

int run_windows(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  uint64_t w = std::max(cfg.k, cfg.l);
  if (cfg.limit > kValueCap || w - 1 > kValueCap - cfg.limit)
    throw DomainError("windows: window exceeds the value cap");
  SegmentPlan plan{1, cfg.limit + 1, cfg.segment_size};
  Fp128 fp = config_fingerprint(cfg);
  uint64_t done = 0;
  KeyStore store;
  if (auto ck = load_resume(cfg, fp, err)) {
    done = ck->done;
    std::istringstream payload(ck->payload);
    store = KeyStore::load(payload);
  }
  auto t0 = Clock::now();
  BasePrimes base = base_primes(isqrt_u64(cfg.limit + w - 1));
  int rc = checkpointed_waves(
      cfg, plan.count(), fp, done,
      [&](uint64_t a, uint64_t b) {
        scan_window_keys(plan, a, b, cfg.k, cfg.l, cfg.threads, base, store);
      },
      [&] {
        std::ostringstream payload;
        store.save(payload);
        return payload.str();
      },
      err);
  if (rc != 0) return rc;
  std::vector<WindowMatch> matches = finalize_window_matches(store, cfg.k, cfg.l, cfg.lo, cfg.hi);
  Output o(cfg, out, err);
  o.header(csv_header(Command::kWindows));
  for (const WindowMatch& m : matches) o.line(windows_record(m, cfg.format));
  o.summary("{\"summary\":\"windows\",\"limit\":" + std::to_string(cfg.limit) +
            ",\"k\":" + std::to_string(cfg.k) + ",\"l\":" + std::to_string(cfg.l) +
            ",\"lo\":" + std::to_string(cfg.lo) + ",\"hi\":" + std::to_string(cfg.hi) +
            ",\"matches\":" + std::to_string(matches.size()) +
            ",\"count_bound\":" + json_number(window_count_bound(cfg.limit, cfg.l)) + "}");
  err << "elapsed_ms=" << elapsed_ms(t0) << "\n";
  if (!cfg.checkpoint_path.empty()) remove_checkpoint(cfg.checkpoint_path);
  return 0;
}

int run_stormer(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.limit > kValueCap - 1) throw DomainError("stormer: limit exceeds the value cap");
  PrimeSupport q = canonical_support(cfg.primes);
  if (q.primes.size() > 20) throw CapacityError("stormer: support size cap is 20 primes");
  std::vector<PrimeSupport> divisors = squarefree_divisors(q);
  divisors.erase(divisors.begin());
  uint64_t total = divisors.size();
  Fp128 fp = config_fingerprint(cfg);
  uint64_t done = 0;
  std::vector<uint64_t> found;
  if (auto ck = load_resume(cfg, fp, err)) {
    done = ck->done;
    found = deser_u64_vec(ck->payload);
  }
  auto t0 = Clock::now();
  SegmentPlan dplan{0, total, 1};
  int rc = checkpointed_waves(
      cfg, total, fp, done,
      [&](uint64_t a, uint64_t b) {
        std::vector<std::vector<uint64_t>> per(b - a);
        run_segments(dplan, a, b, cfg.threads, [&](uint64_t i, uint64_t, uint64_t) {
          per[i - a] = stormer_candidates(divisors[i], q, cfg.limit);
        });
        for (const auto& v : per) found.insert(found.end(), v.begin(), v.end());
      },
      [&] { return ser_u64_vec(found); }, err);
  if (rc != 0) return rc;
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  Output o(cfg, out, err);
  o.header(csv_header(Command::kStormer));
  uint64_t emitted = 0;
  for (uint64_t n : found) {
    if (n < cfg.lo || n >= cfg.hi) continue;
    o.line(stormer_record(n, cfg.format));
    ++emitted;
  }
  double bound = stormer_count_bound(static_cast<uint32_t>(q.primes.size()), cfg.limit);
  o.summary("{\"summary\":\"stormer\",\"limit\":" + std::to_string(cfg.limit) +
            ",\"primes\":" + json_prime_array(q.primes) + ",\"lo\":" + std::to_string(cfg.lo) +
            ",\"hi\":" + std::to_string(cfg.hi) + ",\"count\":" + std::to_string(emitted) +
            ",\"candidate_bound\":" + json_number(bound) + "}");
  err << "elapsed_ms=" << elapsed_ms(t0) << "\n";
  if (!cfg.checkpoint_path.empty()) remove_checkpoint(cfg.checkpoint_path);
  return 0;
}

int run_pell(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  mpz_class d(static_cast<unsigned long>(cfg.d));
  std::vector<PellSolution> sols;
  if (!cfg.max_x.empty()) {
    sols = solutions_up_to(d, mpz_class(cfg.max_x));
  } else {
    PellSolution fundamental = fundamental_solution(d);
    sols.push_back(fundamental);
    while (sols.size() < cfg.count) sols.push_back(next_solution(fundamental, sols.back()));
  }
  Output o(cfg, out, err);
  o.header(csv_header(Command::kPell));
  for (const PellSolution& s : sols) o.line(pell_record(s, cfg.format));
  o.summary("{\"summary\":\"pell\",\"d\":" + std::to_string(cfg.d) +
            ",\"solutions\":" + std::to_string(sols.size()) + "}");
  return 0;
}

int run_nxy(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  SmoothCountReport rep = smooth_count_report(cfg.x, cfg.y, cfg.threads);
  Output o(cfg, out, err);
  o.header(csv_header(Command::kNxy));
  o.line(nxy_record(rep, cfg.format));
  return 0;
}

int run_bounds(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  Output o(cfg, out, err);
  o.header(csv_header(Command::kBounds));
  if (cfg.samples == 0) {
    ProductBoundReport rep = product_ratio_check(cfg.n, cfg.k);
    std::optional<AdjacentRadicalMin> adj;
    std::optional<Rational> ck;
    if (cfg.k >= 2) {
      adj = min_adjacent_radical(cfg.n, cfg.k);
      ck = window_exponent_constant(cfg.k);
    }
    o.line(bounds_record(rep, adj, ck, cfg.format));
    return 0;
  }
  std::mt19937_64 rng(cfg.seed);
  uint64_t failures = 0;
  for (uint64_t s = 0; s < cfg.samples; ++s) {
    uint64_t n = 1 + rng() % cfg.limit;
    uint64_t k = 1 + rng() % cfg.max_k;
    ProductBoundReport rep = product_ratio_check(n, k);
    if (!rep.holds) {
      ++failures;
      o.line(bounds_record(rep, std::nullopt, std::nullopt, cfg.format));
    }
  }
  o.summary("{\"summary\":\"bounds\",\"samples\":" + std::to_string(cfg.samples) +
            ",\"limit\":" + std::to_string(cfg.limit) + ",\"max_k\":" + std::to_string(cfg.max_k) +
            ",\"seed\":" + std::to_string(cfg.seed) + ",\"failures\":" + std::to_string(failures) +
            ",\"holds_all\":" + (failures == 0 ? "true" : "false") + "}");
  return 0;
}

int run_quality(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  Output o(cfg, out, err);
  o.header(csv_header(Command::kQuality));
  if (cfg.has_n) {
    o.line(quality_record(quality(cfg.n), cfg.format));
    return 0;
  }
  QualityScanResult result = quality_scan(cfg.limit);
  for (const QualityRecord& rec : result.record_setters) o.line(quality_record(rec, cfg.format));
  o.summary("{\"summary\":\"quality\",\"limit\":" + std::to_string(cfg.limit) +
            ",\"records\":" + std::to_string(result.record_setters.size()) +
            ",\"best_n\":" + std::to_string(result.best.n) +
            ",\"best_q\":" + format_double(result.best.q_classic) + "}");
  return 0;
}

int run_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  Output o(cfg, out, err);
  if (cfg.has_pair) {
    o.header("m,n,k,ok");
    bool ok = verify_pair(cfg.pair_m, cfg.pair_n, cfg.k);
    o.line(verify_pair_record(cfg.pair_m, cfg.pair_n, cfg.k, ok, cfg.format));
    return 0;
  }
  std::vector<FamilyRecord> records = verify_family(cfg.k_min, cfg.k_max);
  o.header("k,m,n,rad_match,rad_next_match,square_identity,mersenne_factors");
  bool all_ok = true;
  for (const FamilyRecord& r : records) {
    all_ok = all_ok && r.ok();
    o.line(family_record(r, cfg.format));
  }
  o.summary("{\"summary\":\"verify\",\"k_min\":" + std::to_string(cfg.k_min) +
            ",\"k_max\":" + std::to_string(cfg.k_max) +
            ",\"records\":" + std::to_string(records.size()) +
            ",\"all_ok\":" + (all_ok ? "true" : "false") + "}");
  return 0;
}

}  // namespace

int execute(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::kSieve:
      return run_sieve(cfg, out, err);
    case Command::kRuns:
      return run_runs(cfg, out, err);
    case Command::kWindows:
      return run_windows(cfg, out, err);
    case Command::kStormer:
      return run_stormer(cfg, out, err);
    case Command::kPell:
      return run_pell(cfg, out, err);
    case Command::kNxy:
      return run_nxy(cfg, out, err);
    case Command::kBounds:
      return run_bounds(cfg, out, err);
    case Command::kQuality:
      return run_quality(cfg, out, err);
    case Command::kVerify:
      return run_verify(cfg, out, err);
  }
  throw UsageError("unknown command");
}

}  // namespace radseq::cli
