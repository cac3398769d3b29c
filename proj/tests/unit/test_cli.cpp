#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "radseq/sieve.hpp"

using namespace radseq;
using namespace radseq::cli;

namespace {

struct CliResult {
  int rc = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  JobConfig cfg = parse_args(args);
  std::ostringstream out, err;
  CliResult res;
  res.rc = execute(cfg, out, err);
  res.out = out.str();
  res.err = err.str();
  return res;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::vector<std::string> records_of(const std::string& s) {
  std::vector<std::string> recs;
  for (std::string& line : lines_of(s))
    if (!contains(line, "\"summary\"")) recs.push_back(std::move(line));
  return recs;
}

std::string summary_of(const std::string& s) {
  for (const std::string& line : lines_of(s))
    if (contains(line, "\"summary\"")) return line;
  return "";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Scopes a RADSEQ_SEGMENT_SIZE override; the variable is cleared on exit.
struct EnvGuard {
  explicit EnvGuard(const char* value) {
    if (value)
      ::setenv("RADSEQ_SEGMENT_SIZE", value, 1);
    else
      ::unsetenv("RADSEQ_SEGMENT_SIZE");
  }
  ~EnvGuard() { ::unsetenv("RADSEQ_SEGMENT_SIZE"); }
};

}  // namespace

TEST_CASE("parse_args fills scan defaults") {
  EnvGuard env(nullptr);
  JobConfig cfg = parse_args({"runs", "--limit", "1300", "--k", "2"});
  CHECK(cfg.command == Command::kRuns);
  CHECK(cfg.limit == 1300);
  CHECK(cfg.k == 2);
  CHECK(cfg.format == Format::kJsonl);
  CHECK(cfg.lo == 1);
  CHECK(cfg.hi == 1301);
  CHECK_FALSE(cfg.has_shard);
  CHECK(cfg.threads >= 1);
  CHECK(cfg.segment_size == kDefaultSegmentSize);
  CHECK(cfg.stop_after == 0);
  CHECK(cfg.checkpoint_path.empty());
}

TEST_CASE("parse_args reads the segment size environment default") {
  {
    EnvGuard env("8192");
    CHECK(parse_args({"runs", "--limit", "10", "--k", "1"}).segment_size == 8192);
    // An explicit flag wins over the environment.
    CHECK(parse_args({"runs", "--limit", "10", "--k", "1", "--segment-size", "4096"})
              .segment_size == 4096);
  }
  {
    EnvGuard env("512");
    CHECK_THROWS_AS(parse_args({"runs", "--limit", "10", "--k", "1"}), UsageError);
  }
  {
    EnvGuard env("3000");
    CHECK_THROWS_AS(parse_args({"runs", "--limit", "10", "--k", "1"}), UsageError);
  }
  {
    EnvGuard env("4096x");
    CHECK_THROWS_AS(parse_args({"runs", "--limit", "10", "--k", "1"}), UsageError);
  }
}

TEST_CASE("parse_args normalizes the stormer prime set") {
  JobConfig cfg = parse_args({"stormer", "--primes", "5,3,2,3", "--limit", "1000"});
  CHECK(cfg.command == Command::kStormer);
  CHECK(cfg.primes == std::vector<uint64_t>{2, 3, 5});
  CHECK_THROWS_AS(parse_args({"stormer", "--primes", "2,4", "--limit", "10"}), UsageError);
  CHECK_THROWS_AS(parse_args({"stormer", "--primes", "2,3", "--limit", "0"}), UsageError);
}

TEST_CASE("parse_args handles shard bounds") {
  JobConfig cfg = parse_args({"runs", "--limit", "100", "--k", "1", "--lo", "10", "--hi", "50"});
  CHECK(cfg.has_shard);
  CHECK(cfg.lo == 10);
  CHECK(cfg.hi == 50);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--lo", "50", "--hi", "50"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--hi", "200"}), UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--lo", "0"}), UsageError);
}

TEST_CASE("parse_args resolves the pell mode") {
  JobConfig one = parse_args({"pell", "--d", "2"});
  CHECK(one.count == 1);
  CHECK(one.max_x.empty());
  JobConfig counted = parse_args({"pell", "--d", "2", "--count", "5"});
  CHECK(counted.count == 5);
  JobConfig ranged = parse_args({"pell", "--d", "2", "--max-x", "100"});
  CHECK(ranged.max_x == "100");
  CHECK_THROWS_AS(parse_args({"pell", "--d", "2", "--max-x", "9", "--count", "2"}), UsageError);
  CHECK_THROWS_AS(parse_args({"pell", "--d", "2", "--max-x", "12a"}), UsageError);
  CHECK_THROWS_AS(parse_args({"pell", "--d", "2", "--count", "0"}), UsageError);
}

TEST_CASE("parse_args resolves the bounds mode") {
  JobConfig single = parse_args({"bounds", "--n", "2", "--k", "2"});
  CHECK(single.has_n);
  JobConfig sweep = parse_args({"bounds", "--samples", "10", "--limit", "100"});
  CHECK_FALSE(sweep.has_n);
  CHECK(sweep.samples == 10);
  CHECK(sweep.max_k == 30);
  CHECK(sweep.seed == 1);
  CHECK_THROWS_AS(parse_args({"bounds", "--n", "2"}), UsageError);
  CHECK_THROWS_AS(parse_args({"bounds", "--samples", "10", "--n", "2", "--k", "2"}), UsageError);
  CHECK_THROWS_AS(parse_args({"bounds", "--samples", "10"}), UsageError);
  CHECK_THROWS_AS(parse_args({"bounds"}), UsageError);
}

TEST_CASE("parse_args resolves the quality mode") {
  CHECK(parse_args({"quality", "--n", "8"}).has_n);
  CHECK_FALSE(parse_args({"quality", "--limit", "100"}).has_n);
  CHECK_THROWS_AS(parse_args({"quality"}), UsageError);
  CHECK_THROWS_AS(parse_args({"quality", "--n", "8", "--limit", "100"}), UsageError);
}

TEST_CASE("parse_args resolves the verify mode") {
  JobConfig pair = parse_args({"verify", "--pair", "75", "1215"});
  CHECK(pair.has_pair);
  CHECK(pair.pair_m == 75);
  CHECK(pair.pair_n == 1215);
  CHECK(pair.k == 2);
  CHECK(parse_args({"verify", "--pair", "2", "8", "--k", "3"}).k == 3);
  JobConfig family = parse_args({"verify", "--family", "--k-min", "2", "--k-max", "10"});
  CHECK(family.family);
  CHECK(family.k_min == 2);
  CHECK(family.k_max == 10);
  CHECK_THROWS_AS(parse_args({"verify"}), UsageError);
  CHECK_THROWS_AS(parse_args({"verify", "--pair", "2", "8", "--family"}), UsageError);
  CHECK_THROWS_AS(parse_args({"verify", "--pair", "75"}), UsageError);
}

TEST_CASE("parse_args rejects malformed invocations") {
  CHECK_THROWS_AS(parse_args({}), UsageError);
  CHECK_THROWS_AS(parse_args({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "1", "--k", "1"}), UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "0"}), UsageError);
  CHECK_THROWS_AS(parse_args({"windows", "--limit", "100", "--k", "2"}), UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--format", "xml"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--segment-size", "1000"}),
                  UsageError);
  CHECK_THROWS_AS(
      parse_args({"runs", "--limit", "100", "--k", "1", "--segment-size", "134217728"}),
      UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--threads", "0"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"runs", "--limit", "100", "--k", "1", "--threads", "2000"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"sieve", "--lo", "5", "--hi", "5"}), UsageError);
  CHECK_THROWS_AS(parse_args({"sieve", "--lo", "1", "--hi", "10", "--checkpoint", "x.ckpt"}),
                  UsageError);
  CHECK_THROWS_AS(parse_args({"nxy", "--x", "0", "--y", "5"}), UsageError);
}

TEST_CASE("parse_args surfaces help requests") {
  CHECK_THROWS_AS(parse_args({"--help"}), HelpRequested);
  try {
    parse_args({"runs", "--help"});
    FAIL("expected HelpRequested");
  } catch (const HelpRequested& h) {
    CHECK(contains(h.text, "--limit"));
  }
}

TEST_CASE("runs command reports matching radical runs") {
  CliResult res = run_cli({"runs", "--limit", "1300", "--k", "2"});
  CHECK(res.rc == 0);
  std::vector<std::string> want{
      "{\"m\":2,\"n\":8,\"run\":2}",    "{\"m\":6,\"n\":48,\"run\":2}",
      "{\"m\":14,\"n\":224,\"run\":2}", "{\"m\":30,\"n\":960,\"run\":2}",
      "{\"m\":75,\"n\":1215,\"run\":2}"};
  CHECK(records_of(res.out) == want);
  std::string summary = summary_of(res.out);
  CHECK(contains(summary,
                 "{\"summary\":\"runs\",\"limit\":1300,\"k\":2,\"lo\":1,\"hi\":1301,\"pairs\":5"));
  CHECK(contains(summary, "\"k_bound_pow32\":"));
  CHECK(contains(summary, "\"k_bound_pow3\":"));
  CHECK(contains(res.err, "elapsed_ms="));
}

TEST_CASE("runs output is byte identical across thread counts") {
  auto run = [](const char* threads) {
    return run_cli({"runs", "--limit", "20000", "--k", "1", "--segment-size", "1024", "--threads",
                    threads});
  };
  CliResult base = run("1");
  CHECK(base.rc == 0);
  CHECK_FALSE(records_of(base.out).empty());
  CHECK(run("4").out == base.out);
  CHECK(run("8").out == base.out);
}

TEST_CASE("runs shards partition the full listing") {
  std::vector<std::string> full =
      records_of(run_cli({"runs", "--limit", "2000", "--k", "1"}).out);
  std::vector<std::string> low = records_of(
      run_cli({"runs", "--limit", "2000", "--k", "1", "--lo", "1", "--hi", "901"}).out);
  std::vector<std::string> high = records_of(
      run_cli({"runs", "--limit", "2000", "--k", "1", "--lo", "901", "--hi", "2001"}).out);
  std::vector<std::string> stitched = low;
  stitched.insert(stitched.end(), high.begin(), high.end());
  CHECK(stitched == full);
}

TEST_CASE("windows command lists equal support windows") {
  CliResult res = run_cli({"windows", "--limit", "10", "--k", "2", "--l", "2"});
  CHECK(res.rc == 0);
  std::vector<std::string> want{
      "{\"m\":2,\"n\":3,\"k\":2,\"l\":2,\"rad\":[2,3]}",
      "{\"m\":2,\"n\":8,\"k\":2,\"l\":2,\"rad\":[2,3]}",
      "{\"m\":3,\"n\":8,\"k\":2,\"l\":2,\"rad\":[2,3]}",
      "{\"m\":5,\"n\":9,\"k\":2,\"l\":2,\"rad\":[2,3,5]}"};
  CHECK(records_of(res.out) == want);
  CHECK(contains(summary_of(res.out), "\"matches\":4"));
  CHECK(contains(summary_of(res.out), "\"count_bound\":"));

  CliResult csv = run_cli({"windows", "--limit", "10", "--k", "2", "--l", "2", "--format", "csv"});
  std::vector<std::string> rows = lines_of(csv.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "m,n,k,l,rad");
  CHECK(rows[4] == "5,9,2,2,2;3;5");
}

TEST_CASE("stormer command lists fully supported n") {
  CliResult res = run_cli({"stormer", "--primes", "2,3", "--limit", "100"});
  CHECK(res.rc == 0);
  std::vector<std::string> want{"{\"n\":1}", "{\"n\":2}", "{\"n\":3}", "{\"n\":8}"};
  CHECK(records_of(res.out) == want);
  std::string summary = summary_of(res.out);
  CHECK(contains(summary, "\"primes\":[2,3]"));
  CHECK(contains(summary, "\"count\":4"));
  CHECK(contains(summary, "\"candidate_bound\":"));

  // Input ordering of the prime set does not matter.
  CHECK(run_cli({"stormer", "--primes", "3,2", "--limit", "100"}).out == res.out);
}

TEST_CASE("pell command emits solution chains") {
  CliResult fundamental = run_cli({"pell", "--d", "61"});
  CHECK(records_of(fundamental.out) ==
        std::vector<std::string>{
            "{\"d\":61,\"index\":1,\"x\":\"1766319049\",\"y\":\"226153980\"}"});

  std::vector<std::string> chain{"{\"d\":2,\"index\":1,\"x\":\"3\",\"y\":\"2\"}",
                                 "{\"d\":2,\"index\":2,\"x\":\"17\",\"y\":\"12\"}",
                                 "{\"d\":2,\"index\":3,\"x\":\"99\",\"y\":\"70\"}"};
  CHECK(records_of(run_cli({"pell", "--d", "2", "--count", "3"}).out) == chain);
  CHECK(records_of(run_cli({"pell", "--d", "2", "--max-x", "100"}).out) == chain);

  CliResult none = run_cli({"pell", "--d", "5", "--max-x", "1"});
  CHECK(records_of(none.out).empty());
  CHECK(contains(summary_of(none.out), "\"solutions\":0"));
}

TEST_CASE("csv format moves the summary to stderr") {
  CliResult res = run_cli({"runs", "--limit", "1300", "--k", "2", "--format", "csv"});
  std::vector<std::string> rows = lines_of(res.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "m,n,run");
  CHECK(rows[1] == "2,8,2");
  CHECK(rows[5] == "75,1215,2");
  CHECK_FALSE(contains(res.out, "summary"));
  CHECK(contains(res.err, "\"summary\":\"runs\""));
}

TEST_CASE("nxy command reports the exact count and estimate") {
  CliResult exact = run_cli({"nxy", "--x", "16", "--y", "2"});
  CHECK(records_of(exact.out) ==
        std::vector<std::string>{
            "{\"x\":16,\"y\":2,\"exact\":5,\"estimate\":null,\"ratio\":null}"});

  CliResult wide = run_cli({"nxy", "--x", "1000000", "--y", "100"});
  std::vector<std::string> recs = records_of(wide.out);
  REQUIRE(recs.size() == 1);
  CHECK(contains(recs[0], "\"estimate\":31756."));
  CHECK(contains(recs[0], "\"ratio\":"));
  CHECK_FALSE(contains(recs[0], "\"ratio\":null"));
}

TEST_CASE("bounds single check emits the exponent vectors") {
  CliResult res = run_cli({"bounds", "--n", "2", "--k", "2"});
  CHECK(records_of(res.out) ==
        std::vector<std::string>{
            "{\"n\":2,\"k\":2,\"holds\":true,\"lhs\":[[2,2],[3,1]],\"rhs\":[[2,2],[3,1]],"
            "\"min_adjacent_i\":0,\"min_adjacent_rad\":6,\"c_k\":\"1/1\"}"});

  // k = 1 has no adjacent pair and no window exponent constant.
  CliResult flat = run_cli({"bounds", "--n", "5", "--k", "1"});
  CHECK(records_of(flat.out) ==
        std::vector<std::string>{
            "{\"n\":5,\"k\":1,\"holds\":true,\"lhs\":[[2,1],[3,1],[5,1]],"
            "\"rhs\":[[2,1],[3,1],[5,1]],\"min_adjacent_i\":null,\"min_adjacent_rad\":null,"
            "\"c_k\":null}"});
}

TEST_CASE("bounds sweep reports only failures") {
  CliResult res =
      run_cli({"bounds", "--samples", "40", "--limit", "100000", "--max-k", "12", "--seed", "7"});
  CHECK(res.rc == 0);
  CHECK(records_of(res.out).empty());
  std::string summary = summary_of(res.out);
  CHECK(contains(summary, "\"samples\":40"));
  CHECK(contains(summary, "\"failures\":0"));
  CHECK(contains(summary, "\"holds_all\":true"));
}

TEST_CASE("quality command emits records and scan summaries") {
  CliResult single = run_cli({"quality", "--n", "8"});
  std::vector<std::string> recs = records_of(single.out);
  REQUIRE(recs.size() == 1);
  CHECK(contains(recs[0], "{\"n\":8,\"r\":6,\"q\":1.22629,\"merit\":0.2102"));

  CliResult scan = run_cli({"quality", "--limit", "9999"});
  std::vector<std::string> setters = records_of(scan.out);
  CHECK(setters.size() == 9);
  CHECK(contains(setters.front(), "{\"n\":2,"));
  CHECK(contains(setters.back(), "{\"n\":4374,\"r\":210,\"q\":1.56789,"));
  CHECK(contains(summary_of(scan.out), "\"best_n\":4374"));
}

TEST_CASE("verify command confirms pairs and the doubling family") {
  CliResult pair = run_cli({"verify", "--pair", "75", "1215"});
  CHECK(records_of(pair.out) ==
        std::vector<std::string>{"{\"m\":75,\"n\":1215,\"k\":2,\"ok\":true}"});

  CliResult miss = run_cli({"verify", "--pair", "2", "3"});
  CHECK(records_of(miss.out) ==
        std::vector<std::string>{"{\"m\":2,\"n\":3,\"k\":2,\"ok\":false}"});

  CliResult deep = run_cli({"verify", "--pair", "2", "8", "--k", "3"});
  CHECK(records_of(deep.out) ==
        std::vector<std::string>{"{\"m\":2,\"n\":8,\"k\":3,\"ok\":false}"});

  CliResult family = run_cli({"verify", "--family", "--k-min", "2", "--k-max", "10"});
  std::vector<std::string> recs = records_of(family.out);
  REQUIRE(recs.size() == 9);
  CHECK(recs[0] ==
        "{\"k\":2,\"m\":\"2\",\"n\":\"8\",\"rad_match\":true,\"rad_next_match\":true,"
        "\"square_identity\":true,\"mersenne_factors\":[[3,1]]}");
  for (const std::string& r : recs) CHECK(contains(r, "\"square_identity\":true"));
  CHECK(contains(summary_of(family.out), "\"all_ok\":true"));
}

TEST_CASE("sieve command writes the radical of every value") {
  CliResult res = run_cli({"sieve", "--lo", "1", "--hi", "11"});
  std::vector<std::string> recs = records_of(res.out);
  REQUIRE(recs.size() == 10);
  CHECK(recs.front() == "{\"n\":1,\"rad\":1}");
  CHECK(recs[7] == "{\"n\":8,\"rad\":2}");
  CHECK(recs.back() == "{\"n\":10,\"rad\":10}");
  CHECK(summary_of(res.out) == "{\"summary\":\"sieve\",\"lo\":1,\"hi\":11,\"records\":10}");

  CliResult csv = run_cli({"sieve", "--lo", "1", "--hi", "4", "--format", "csv"});
  CHECK(lines_of(csv.out) == std::vector<std::string>{"n,rad", "1,1", "2,2", "3,3"});
}

TEST_CASE("stop-after interrupts a scan with exit code 3") {
  CliResult res = run_cli(
      {"runs", "--limit", "100000", "--k", "2", "--segment-size", "1024", "--stop-after", "2",
       "--threads", "2"});
  CHECK(res.rc == 3);
  CHECK(res.out.empty());
  CHECK(contains(res.err, "stopped after 2 of"));
}

TEST_CASE("checkpoint resume completes an interrupted scan") {
  namespace fs = std::filesystem;
  fs::path ck = fs::temp_directory_path() / "radseq_test_runs.ckpt";
  fs::remove(ck);

  CliResult clean = run_cli({"runs", "--limit", "20000", "--k", "1", "--segment-size", "1024"});

  std::vector<std::string> tail{"--segment-size", "1024", "--checkpoint", ck.string()};
  std::vector<std::string> interrupted{"runs", "--limit", "20000", "--k", "1", "--stop-after",
                                       "7", "--threads", "3"};
  interrupted.insert(interrupted.end(), tail.begin(), tail.end());
  CliResult stopped = run_cli(interrupted);
  CHECK(stopped.rc == 3);
  CHECK(fs::exists(ck));

  std::vector<std::string> resumed{"runs", "--limit", "20000", "--k", "1", "--threads", "2"};
  resumed.insert(resumed.end(), tail.begin(), tail.end());
  CliResult finished = run_cli(resumed);
  CHECK(finished.rc == 0);
  CHECK(contains(finished.err, "resuming from"));
  CHECK(finished.out == clean.out);
  CHECK_FALSE(fs::exists(ck));
}

TEST_CASE("checkpoint rejects a different job configuration") {
  namespace fs = std::filesystem;
  fs::path ck = fs::temp_directory_path() / "radseq_test_mismatch.ckpt";
  fs::remove(ck);
  CliResult stopped = run_cli({"runs", "--limit", "20000", "--k", "1", "--segment-size", "1024",
                               "--checkpoint", ck.string(), "--stop-after", "1", "--threads", "2"});
  CHECK(stopped.rc == 3);
  CHECK_THROWS_AS(run_cli({"runs", "--limit", "30000", "--k", "1", "--segment-size", "1024",
                           "--checkpoint", ck.string()}),
                  UsageError);
  fs::remove(ck);
}

TEST_CASE("sieve resume truncates stray bytes from the output file") {
  namespace fs = std::filesystem;
  fs::path out = fs::temp_directory_path() / "radseq_test_sieve.jsonl";
  fs::path ck = fs::temp_directory_path() / "radseq_test_sieve.ckpt";
  fs::remove(out);
  fs::remove(ck);

  CliResult clean = run_cli({"sieve", "--lo", "1", "--hi", "30000", "--segment-size", "1024"});

  std::vector<std::string> tail{"--segment-size", "1024", "--out", out.string(), "--checkpoint",
                                ck.string()};
  std::vector<std::string> interrupted{"sieve", "--lo", "1", "--hi", "30000", "--stop-after", "3",
                                       "--threads", "2"};
  interrupted.insert(interrupted.end(), tail.begin(), tail.end());
  CHECK(run_cli(interrupted).rc == 3);
  REQUIRE(fs::exists(ck));
  {
    std::ofstream append(out, std::ios::binary | std::ios::app);
    append << "{\"garbage\":true}\n";
  }

  std::vector<std::string> resumed{"sieve", "--lo", "1", "--hi", "30000", "--threads", "4"};
  resumed.insert(resumed.end(), tail.begin(), tail.end());
  CHECK(run_cli(resumed).rc == 0);
  CHECK_FALSE(fs::exists(ck));
  CHECK(read_file(out) == clean.out);
  fs::remove(out);
}

TEST_CASE("run_main maps exceptions to exit codes") {
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    static std::string name = "radseq";
    argv.push_back(name.data());
    for (std::string& a : args) argv.push_back(a.data());
    return run_main(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(call({}) == 1);
  CHECK(call({"runs", "--limit", "1", "--k", "1"}) == 1);
  CHECK(call({"pell", "--d", "4"}) == 2);
  CHECK(call({"quality", "--n", "1"}) == 2);
}
