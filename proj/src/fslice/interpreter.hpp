#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fslice/lang.hpp"

namespace fslice {

struct Value {
  enum class Kind { Int, Nil, Loc, Hole };
  Kind kind = Kind::Nil;
  std::int64_t n = 0;     // Int
  std::uint64_t loc = 0;  // Loc

  static Value integer(std::int64_t n) { return {Kind::Int, n, 0}; }
  static Value nil() { return {Kind::Nil, 0, 0}; }
  static Value location(std::uint64_t l) { return {Kind::Loc, 0, l}; }
  static Value hole() { return {Kind::Hole, 0, 0}; }
  bool operator==(const Value&) const = default;
};

struct Cell {
  Value car, cdr;
};

/// Locations are indices; allocation is monotone so a location is never reused.
struct Heap {
  std::vector<Cell> cells;
  Value alloc(Value a, Value d) {
    cells.push_back({a, d});
    return Value::location(cells.size() - 1);
  }
  const Cell& at(std::uint64_t loc) const { return cells.at(loc); }
};

struct RunOptions {
  std::uint64_t fuel = 1'000'000;
  std::ostream* trace = nullptr;  // one line per transition: "<rule> <label>"
};

struct RunResult {
  Value value;
  Heap heap;
  std::uint64_t steps = 0;
};

/// Runs `main`. A hole reaching an `if` guard raises HoleObserved; holes flowing
/// through car/cdr/null?/arithmetic just produce holes.
RunResult run_program(const Program& program, const RunOptions& options = {});

/// `(1 2 . 3)`-style rendering; holes print as `□`.
std::string render_value(const Value& v, const Heap& heap);

struct Observation {
  enum class Kind { Int, Nil, Pair, Absent };
  Kind kind = Kind::Absent;
  std::int64_t n = 0;
  bool operator==(const Observation&) const = default;
};

std::string to_string(const Observation& o);

/// Follows each path ('0' = car, '1' = cdr). A path that runs off a non-pair is
/// Absent. Reaching a hole throws HoleObserved.
std::map<std::string, Observation> project(const Value& v, const Heap& heap,
                                           const std::vector<std::string>& paths);

}  // namespace fslice
