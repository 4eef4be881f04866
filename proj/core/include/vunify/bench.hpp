// Benchmark suite loader (TOML subset) and runner producing the CSV table.
#ifndef VUNIFY_BENCH_HPP
#define VUNIFY_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

namespace vunify {

struct BenchProblem {
  std::string id;
  std::string theory_path;        // resolved relative to the suite file
  std::string problem;            // "t1 =? t1' /\ ..." surface syntax
  std::optional<long> expect_plain;
  std::optional<long> expect_post;       // post + quotient, as in the tables
  std::optional<long> expect_fast;       // fast + quotient
  std::optional<long> expect_fast_post;  // fast + post + quotient
  std::string source;             // citation for the expected counts
  std::optional<double> timeout_s;
};

struct BenchSuite {
  std::string name;
  double default_timeout_s = 60.0;
  std::vector<BenchProblem> problems;
};

BenchSuite parse_suite_file(const std::string& path);

struct ModeResult {
  bool ran = false;
  bool timed_out = false;
  long count = -1;
  double millis = 0.0;
};

struct BenchRow {
  std::string id;
  std::string theory;
  std::string problem;
  ModeResult plain, post, fast, fast_post;
  std::string status;  // "ok", "MISMATCH(...)", "T/O(...)", "ERROR(...)"
};

struct BenchOptions {
  std::optional<double> timeout_s;  // overrides the suite default
  bool run_plain = true, run_post = true, run_fast = true, run_fast_post = true;
};

std::vector<BenchRow> run_benchmarks(const BenchSuite& suite, const BenchOptions& opts);

std::string rows_to_csv(const std::vector<BenchRow>& rows);
std::string rows_to_table(const std::vector<BenchRow>& rows);

}  // namespace vunify

#endif
