#include "vunify/bench.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vunify/errors.hpp"
#include "vunify/parser.hpp"
#include "vunify/unifier.hpp"

namespace vunify {

namespace {

std::string dirname_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// minimal TOML subset: [suite] table, [[problem]] array tables,
// key = "string" | integer | float
struct KV {
  std::string section;
  std::string key;
  std::string value;
  bool is_string = false;
};

std::vector<KV> parse_toml_subset(const std::string& text, const std::string& file) {
  std::vector<KV> out;
  std::istringstream in(text);
  std::string line, section;
  int problem_idx = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("[[", 0) == 0) {
      std::string name = trim(line.substr(2, line.size() - 4));
      if (name != "problem") throw ParseError(file + ": unknown table '" + name + "'", lineno, 1);
      section = "problem" + std::to_string(++problem_idx);
      continue;
    }
    if (line.front() == '[') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(file + ": expected key = value", lineno, 1);
    KV kv;
    kv.section = section;
    kv.key = trim(line.substr(0, eq));
    std::string v = trim(line.substr(eq + 1));
    if (!v.empty() && v.front() == '"') {
      if (v.size() < 2 || v.back() != '"')
        throw ParseError(file + ": unterminated string", lineno, 1);
      kv.is_string = true;
      std::string s;
      for (size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] == '\\' && i + 2 < v.size()) {
          ++i;
          s += v[i];
        } else {
          s += v[i];
        }
      }
      kv.value = s;
    } else {
      kv.value = v;
    }
    out.push_back(std::move(kv));
  }
  return out;
}

}  // namespace

BenchSuite parse_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open suite file '" + path + "'", 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  auto kvs = parse_toml_subset(ss.str(), path);

  BenchSuite suite;
  std::string dir = dirname_of(path);
  std::map<std::string, BenchProblem> problems;  // by section, ordered
  std::vector<std::string> order;
  for (auto& kv : kvs) {
    if (kv.section == "suite") {
      if (kv.key == "name") suite.name = kv.value;
      else if (kv.key == "timeout") suite.default_timeout_s = std::stod(kv.value);
      continue;
    }
    if (kv.section.rfind("problem", 0) != 0)
      throw ParseError("unknown section '" + kv.section + "' in " + path, 0, 0);
    if (!problems.count(kv.section)) order.push_back(kv.section);
    BenchProblem& p = problems[kv.section];
    if (kv.key == "id") p.id = kv.value;
    else if (kv.key == "theory") p.theory_path = dir + "/" + kv.value;
    else if (kv.key == "problem") p.problem = kv.value;
    else if (kv.key == "expect_plain") p.expect_plain = std::stol(kv.value);
    else if (kv.key == "expect_post") p.expect_post = std::stol(kv.value);
    else if (kv.key == "expect_fast") p.expect_fast = std::stol(kv.value);
    else if (kv.key == "expect_fast_post") p.expect_fast_post = std::stol(kv.value);
    else if (kv.key == "source") p.source = kv.value;
    else if (kv.key == "timeout") p.timeout_s = std::stod(kv.value);
    else throw ParseError("unknown key '" + kv.key + "' in " + path, 0, 0);
  }
  for (auto& s : order) suite.problems.push_back(problems[s]);
  return suite;
}

namespace {

ModeResult run_mode(const Theory& th, const std::vector<std::pair<Term, Term>>& eqs,
                    UnifyModes modes, double timeout_s) {
  ModeResult r;
  r.ran = true;
  Engine engine(th);
  engine.set_deadline(std::chrono::steady_clock::now() +
                      std::chrono::milliseconds(static_cast<long>(timeout_s * 1000)));
  auto t0 = std::chrono::steady_clock::now();
  try {
    UnificationProblem p;
    p.equations = eqs;
    UnifierSet us = engine.unify(p, modes);
    r.count = static_cast<long>(us.unifiers.size());
  } catch (const TimeoutError&) {
    r.timed_out = true;
  }
  auto t1 = std::chrono::steady_clock::now();
  r.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

std::string cell(const ModeResult& r) {
  if (!r.ran) return "-";
  if (r.timed_out) return "T/O";
  return std::to_string(r.count);
}

std::string ms_cell(const ModeResult& r) {
  if (!r.ran) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << r.millis;
  return os.str();
}

void check_expect(std::vector<std::string>& bad, const char* name, const ModeResult& r,
                  const std::optional<long>& want) {
  if (!want || !r.ran || r.timed_out) return;
  if (r.count != *want)
    bad.push_back(std::string(name) + ": got " + std::to_string(r.count) + ", expected " +
                  std::to_string(*want));
}

}  // namespace

std::vector<BenchRow> run_benchmarks(const BenchSuite& suite, const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  std::map<std::string, Theory> theories;
  for (const auto& p : suite.problems) {
    BenchRow row;
    row.id = p.id;
    row.problem = p.problem;
    double timeout = opts.timeout_s ? *opts.timeout_s
                                    : (p.timeout_s ? *p.timeout_s : suite.default_timeout_s);
    try {
      if (!theories.count(p.theory_path))
        theories.emplace(p.theory_path, parse_theory_file(p.theory_path).theory);
      const Theory& th = theories.at(p.theory_path);
      row.theory = th.name;
      auto eqs = parse_equations(th, p.problem);
      // the four modes of the experimental tables: plain, post+quotient,
      // fast+quotient, fast+post+quotient
      if (opts.run_plain) row.plain = run_mode(th, eqs, UnifyModes{false, false, false}, timeout);
      if (opts.run_post) row.post = run_mode(th, eqs, UnifyModes{false, true, true}, timeout);
      if (opts.run_fast) row.fast = run_mode(th, eqs, UnifyModes{true, false, true}, timeout);
      if (opts.run_fast_post)
        row.fast_post = run_mode(th, eqs, UnifyModes{true, true, true}, timeout);

      std::vector<std::string> bad;
      check_expect(bad, "plain", row.plain, p.expect_plain);
      check_expect(bad, "post", row.post, p.expect_post);
      check_expect(bad, "fast", row.fast, p.expect_fast);
      check_expect(bad, "fast_post", row.fast_post, p.expect_fast_post);
      if (row.plain.timed_out || row.post.timed_out || row.fast.timed_out ||
          row.fast_post.timed_out) {
        row.status = "T/O";
      } else if (bad.empty()) {
        row.status = "ok";
      } else {
        std::string s = "MISMATCH(";
        for (size_t i = 0; i < bad.size(); ++i) s += (i ? "; " : "") + bad[i];
        s += ")";
        if (!p.source.empty()) s += " vs " + p.source;
        row.status = s;
      }
    } catch (const std::exception& e) {
      row.status = std::string("ERROR(") + e.what() + ")";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string rows_to_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "id,theory,problem,#plain,t_plain,#post,t_post,#fast,t_fast,#fast_post,t_fast_post,"
        "status\n";
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += "\"\"";
      else out += c;
    }
    return out + "\"";
  };
  for (const auto& r : rows) {
    os << r.id << "," << r.theory << "," << quote(r.problem) << "," << cell(r.plain) << ","
       << ms_cell(r.plain) << "," << cell(r.post) << "," << ms_cell(r.post) << "," << cell(r.fast)
       << "," << ms_cell(r.fast) << "," << cell(r.fast_post) << "," << ms_cell(r.fast_post) << ","
       << quote(r.status) << "\n";
  }
  return os.str();
}

std::string rows_to_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "id" << std::setw(34) << "problem" << std::right
     << std::setw(8) << "#plain" << std::setw(10) << "t_plain" << std::setw(8) << "#post"
     << std::setw(12) << "t_post" << std::setw(8) << "#fast" << std::setw(10) << "t_fast"
     << std::setw(8) << "#f,p" << std::setw(12) << "t_f,p"
     << "  status\n";
  for (const auto& r : rows) {
    std::string prob = r.problem.size() > 32 ? r.problem.substr(0, 29) + "..." : r.problem;
    os << std::left << std::setw(6) << r.id << std::setw(34) << prob << std::right << std::setw(8)
       << cell(r.plain) << std::setw(10) << ms_cell(r.plain) << std::setw(8) << cell(r.post)
       << std::setw(12) << ms_cell(r.post) << std::setw(8) << cell(r.fast) << std::setw(10)
       << ms_cell(r.fast) << std::setw(8) << cell(r.fast_post) << std::setw(12)
       << ms_cell(r.fast_post) << "  " << r.status << "\n";
  }
  return os.str();
}

}  // namespace vunify
