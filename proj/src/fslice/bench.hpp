#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fslice/slicer.hpp"

namespace fslice {

struct BenchOptions {
  unsigned runs = 5;
  SliceOptions slice{1, {}};  // serialized by default so timings do not interfere
};

struct BenchCell {
  std::string criterion;
  double noninc_ms = 0;
  double inc_ms = 0;
  std::size_t kept = 0;  // expressions kept
  bool agree = true;     // inc and noninc keep maps equal
};

struct BenchRow {
  std::string program;
  std::size_t exprs = 0;
  double precompute_ms = 0;
  std::vector<BenchCell> cells;
  std::string error;  // nonempty when the program could not be benchmarked
};

struct BenchReport {
  std::vector<std::string> criteria;
  std::vector<BenchRow> rows;
};

double median(std::vector<double> xs);

/// Number of expressions (not applications or occurrences) and how many are kept.
std::size_t count_exprs(const Program& program);
std::size_t count_kept_exprs(const Program& program, const KeepMap& keep);

/// Medians over `runs` runs. Parsing is not timed; non-incremental time covers
/// the whole demand analysis, incremental time only the intersections.
BenchRow bench_program(const std::string& name, const Program& program, const std::vector<Criterion>& criteria,
                       const BenchOptions& options = {});

/// Every `*.fsl` in `dir`, sorted by name. Failures are recorded per row.
BenchReport bench_corpus(const std::string& dir, const std::vector<std::string>& criteria,
                         const BenchOptions& options = {});

std::string render_table(const BenchReport& report);
nlohmann::json to_json(const BenchReport& report);

/// True when every incremental cell beat its non-incremental counterpart.
bool inc_faster(const BenchReport& report);

}  // namespace fslice
