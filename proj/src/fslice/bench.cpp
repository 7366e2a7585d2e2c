#include "fslice/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fslice/artifact.hpp"

namespace fslice {

double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

std::size_t count_exprs(const Program& program) {
  std::size_t n = 0;
  for (const LabelSite& s : collect_labels(program)) n += s.kind == SiteKind::Expr;
  return n;
}

std::size_t count_kept_exprs(const Program& program, const KeepMap& keep) {
  std::size_t n = 0;
  for (const LabelSite& s : collect_labels(program))
    if (s.kind == SiteKind::Expr) {
      auto it = keep.find(s.label);
      n += it != keep.end() && it->second;
    }
  return n;
}

namespace {

template <class F>
double time_ms(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchRow bench_program(const std::string& name, const Program& program, const std::vector<Criterion>& criteria,
                       const BenchOptions& options) {
  BenchRow row;
  row.program = name;
  row.exprs = count_exprs(program);
  unsigned runs = std::max(1u, options.runs);
  PrecomputeArtifact art;
  std::vector<double> pre;
  for (unsigned i = 0; i < runs; ++i) pre.push_back(time_ms([&] { art = precompute(program, options.slice); }));
  row.precompute_ms = median(pre);
  for (const Criterion& c : criteria) {
    BenchCell cell;
    cell.criterion = c.text;
    KeepMap a, b;
    std::vector<double> non, inc;
    for (unsigned i = 0; i < runs; ++i) {
      non.push_back(time_ms([&] { a = keep_noninc(program, c.nfa, options.slice); }));
      inc.push_back(time_ms([&] { b = keep_inc(art, c.nfa); }));
    }
    cell.noninc_ms = median(non);
    cell.inc_ms = median(inc);
    cell.kept = count_kept_exprs(program, a);
    cell.agree = a == b;
    row.cells.push_back(cell);
  }
  return row;
}

BenchReport bench_corpus(const std::string& dir, const std::vector<std::string>& criteria,
                         const BenchOptions& options) {
  namespace fs = std::filesystem;
  BenchReport report;
  report.criteria = criteria;
  std::vector<Criterion> parsed;
  for (const std::string& c : criteria) parsed.push_back(parse_criterion(c));
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".fsl") files.push_back(entry.path());
  if (ec) throw Error(ErrorKind::Io, "cannot list '" + dir + "': " + ec.message());
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::string name = f.stem().string();
    try {
      report.rows.push_back(bench_program(name, parse_program(read_file(f.string())), parsed, options));
    } catch (const Error& e) {
      BenchRow row;
      row.program = name;
      row.error = e.what();
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string render_table(const BenchReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-20s %7s %12s", "program", "#exprs", "precomp(ms)");
  out << buf;
  for (const std::string& c : report.criteria) {
    std::snprintf(buf, sizeof buf, " | %-28s", ("{" + c + "} noninc/inc(ms) kept").c_str());
    out << buf;
  }
  out << "\n";
  for (const BenchRow& row : report.rows) {
    if (!row.error.empty()) {
      std::snprintf(buf, sizeof buf, "%-20s error: ", row.program.c_str());
      out << buf << row.error << "\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%-20s %7zu %12.3f", row.program.c_str(), row.exprs, row.precompute_ms);
    out << buf;
    for (const BenchCell& c : row.cells) {
      std::snprintf(buf, sizeof buf, " | %10.3f %9.4f %6zu%s", c.noninc_ms, c.inc_ms, c.kept, c.agree ? "" : "!");
      out << buf;
    }
    out << "\n";
  }
  bool ok = inc_faster(report);
  out << (ok ? "inc < noninc on every cell: yes" : "inc < noninc on every cell: NO") << "\n";
  return out.str();
}

nlohmann::json to_json(const BenchReport& report) {
  using nlohmann::json;
  json rows = json::array();
  for (const BenchRow& row : report.rows) {
    json r{{"program", row.program}};
    if (!row.error.empty()) {
      r["error"] = row.error;
      rows.push_back(r);
      continue;
    }
    r["exprs"] = row.exprs;
    r["precompute_ms"] = row.precompute_ms;
    json cells = json::array();
    for (const BenchCell& c : row.cells)
      cells.push_back({{"criterion", c.criterion},
                       {"noninc_ms", c.noninc_ms},
                       {"inc_ms", c.inc_ms},
                       {"kept", c.kept},
                       {"agree", c.agree}});
    r["cells"] = cells;
    rows.push_back(r);
  }
  return json{{"criteria", report.criteria}, {"rows", rows}, {"inc_faster", inc_faster(report)}};
}

bool inc_faster(const BenchReport& report) {
  for (const BenchRow& row : report.rows)
    for (const BenchCell& c : row.cells)
      if (!(c.inc_ms < c.noninc_ms)) return false;
  return true;
}

}  // namespace fslice
