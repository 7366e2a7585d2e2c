#pragma once

#include "fslice/grammar.hpp"
#include "fslice/nfa.hpp"

namespace fslice {

struct MnOptions {
  std::size_t max_states = 4'000'000;
};

/// Regular over-approximation of L(start). Strongly regular parts of the
/// grammar are translated exactly; self-embedding components are relaxed.
Nfa mohri_nederhof(const Grammar& g, NonTerm start, const MnOptions& options = {});

/// Automaton for the simplified language: strings over {0,1}.
Nfa simplify_nfa(const Nfa& m);

/// Automaton for the canonicalized language: (0+1+2)*(0̄+1̄)*, ε-free, trimmed.
Nfa canonicalize_nfa(const Nfa& m);

/// The completing automaton of a canonical automaton. Throws if a transition
/// violates the canonical shape.
Nfa completing_automaton(const Nfa& canonical);

}  // namespace fslice
