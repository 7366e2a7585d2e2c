#pragma once

#include <map>
#include <string>

#include "fslice/criterion.hpp"
#include "fslice/grammar.hpp"
#include "fslice/lang.hpp"
#include "fslice/regular.hpp"

namespace fslice {

using KeepMap = std::map<Label, bool>;

struct SliceResult {
  KeepMap keep;
  Program residual;
  std::string criterion;
};

struct SliceOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  MnOptions mn;
};

/// Completing automata for every label, computed once per program.
struct PrecomputeArtifact {
  std::string version;
  std::string fingerprint;
  std::map<Label, Nfa> automata;
};

/// SHA-256 (hex) of the label-annotated printed program.
std::string fingerprint(const Program& program);

/// Simplified demand automaton at `pt` for criterion `crit`, over {0,1}.
Nfa demand_automaton(const Grammar& with_crit, Label pt, const MnOptions& mn = {});
/// Canonical demand automaton at `pt` for the criterion {ε}.
Nfa canonical_automaton(const Grammar& with_eps, Label pt, const MnOptions& mn = {});

KeepMap keep_noninc(const Program& program, const Nfa& crit, const SliceOptions& options = {});
SliceResult slice_noninc(const Program& program, const Criterion& crit, const SliceOptions& options = {});

PrecomputeArtifact precompute(const Program& program, const SliceOptions& options = {});
bool in_slice(const PrecomputeArtifact& art, Label pt, const Nfa& crit);
KeepMap keep_inc(const PrecomputeArtifact& art, const Nfa& crit);
/// Throws Mismatch when the artifact was computed for a different program.
SliceResult slice_inc(const Program& program, const PrecomputeArtifact& art, const Criterion& crit);

/// Dropped applications and occurrences become holes; a dropped expression
/// collapses to `(return □)`. Parameters whose every use is dropped print as □.
Program extract_residual(const Program& program, const KeepMap& keep);

/// Runs `fn(i)` for i in [0, n) on a small thread pool.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace fslice
