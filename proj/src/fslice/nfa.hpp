#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fslice/demand.hpp"

namespace fslice {

enum class Sym : std::uint8_t { Sel0, Sel1, Bar0, Bar1, Two, Eps };

inline constexpr Sym kSymbols[] = {Sym::Sel0, Sym::Sel1, Sym::Bar0, Sym::Bar1, Sym::Two};

/// '0' '1' 'a' 'b' '2', and 'e' for ε. Matches the SymString encoding.
char sym_char(Sym s);
Sym sym_from_char(char c);
/// "0", "1", "0b", "1b", "2", "eps"
const char* sym_name(Sym s);

using StateId = std::uint32_t;

struct Nfa {
  std::vector<std::vector<std::pair<Sym, StateId>>> adj;
  std::vector<bool> finals;
  StateId start = 0;

  StateId add_state(bool final = false) {
    adj.emplace_back();
    finals.push_back(final);
    return static_cast<StateId>(adj.size() - 1);
  }
  void add(StateId from, Sym s, StateId to) { adj[from].emplace_back(s, to); }
  std::size_t size() const { return adj.size(); }
  std::size_t transition_count() const;
  bool is_final(StateId q) const { return finals[q]; }

  static Nfa empty_language();
  static Nfa epsilon_language();
};

/// Keeps only states that are reachable and co-reachable, renumbered in BFS
/// order from the start state. An empty language becomes `empty_language()`.
Nfa trim(const Nfa& a);
Nfa remove_epsilon(const Nfa& a);
Nfa determinize(const Nfa& a);
/// Minimal trimmed DFA; two automata accept the same language iff their
/// minimized forms are equal up to this canonical numbering.
Nfa minimize(const Nfa& a);
bool equivalent(const Nfa& a, const Nfa& b);

bool is_empty(const Nfa& a);
bool accepts(const Nfa& a, const SymString& s);
bool intersect_nonempty(const Nfa& a, const Nfa& b);
/// Every accepted string of length <= maxlen.
DemandSet enumerate_upto(const Nfa& a, std::size_t maxlen);

Nfa from_strings(const DemandSet& d);
Nfa concat(const Nfa& a, const Nfa& b);
Nfa union_of(const Nfa& a, const Nfa& b);
Nfa prefix_close(const Nfa& a);
bool is_prefix_closed(const Nfa& a);
/// True when no transition uses a symbol outside {0,1} (ε allowed).
bool over_selectors(const Nfa& a);

/// Stable text form: `start 0`, `finals 1 2`, then `p -0b-> q` lines.
std::string dump(const Nfa& a);

}  // namespace fslice
