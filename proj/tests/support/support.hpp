#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fslice/lang.hpp"
#include "fslice/nfa.hpp"

namespace fslice::testing {

struct CorpusProgram {
  std::string name;
  Program program;
};

std::string corpus_dir();
std::string ho_dir();
std::string golden_dir();
std::string read_text(const std::string& path);

/// First-order corpus, sorted by file name.
std::vector<CorpusProgram> load_corpus();
/// Higher-order examples, sorted by file name.
std::vector<CorpusProgram> load_ho_corpus();

/// FSLICE_SEED if set, else 1.
std::uint64_t seed();

/// Enumerated criteria plus `random` seeded ones; strings have length <= 5.
std::vector<std::string> criteria_suite(std::size_t random = 10);
std::string random_criterion(std::mt19937_64& rng, std::size_t max_len = 5);

/// Every prefix-closed set of selector strings of length <= depth, as automata
/// together with a membership test for "0".
void for_each_prefix_closed(std::size_t depth, const std::function<void(const Nfa&, bool has0)>& fn);

/// A first-order program with at least `min_exprs` expressions: a chain of list
/// functions fed by main.
std::string synthesize_program(std::size_t min_exprs);

/// Selector strings of the criterion language up to `max_len`, as '0'/'1' paths.
std::vector<std::string> criterion_paths(const Nfa& crit, std::size_t max_len);

}  // namespace fslice::testing
