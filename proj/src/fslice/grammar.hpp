#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fslice/demand.hpp"
#include "fslice/lang.hpp"
#include "fslice/nfa.hpp"

namespace fslice {

/// D[π]   demand at a label, including the caller context
/// D'[π]  D[π] followed by the end marker (start symbol of an instance)
/// R[π]   demand at π relative to the demand on its enclosing function body
/// L[f,i] summary of parameter i (1-based): R of its occurrences
/// S[f]   demand on the result of f, joined over call sites
/// CRIT   the slicing criterion placeholder; C[q] its right-linear states
struct NonTerm {
  enum class Kind : std::uint8_t { DemandAt, DemandAtPrimed, Relative, Summary, FnDemand, Criterion, CritState };
  Kind kind = Kind::Criterion;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  auto operator<=>(const NonTerm&) const = default;

  static NonTerm demand_at(Label l) { return {Kind::DemandAt, l.id, 0}; }
  static NonTerm demand_primed(Label l) { return {Kind::DemandAtPrimed, l.id, 0}; }
  static NonTerm relative(Label l) { return {Kind::Relative, l.id, 0}; }
  static NonTerm summary(std::size_t fn, std::size_t param) {
    return {Kind::Summary, static_cast<std::uint32_t>(fn), static_cast<std::uint32_t>(param)};
  }
  static NonTerm fn_demand(std::size_t fn) { return {Kind::FnDemand, static_cast<std::uint32_t>(fn), 0}; }
  static NonTerm criterion() { return {Kind::Criterion, 0, 0}; }
  static NonTerm crit_state(StateId q) { return {Kind::CritState, q, 0}; }
};

/// A terminal (one of the SymString chars, or '$') or a nonterminal.
struct GSym {
  bool terminal = true;
  char t = 0;
  NonTerm nt;
  auto operator<=>(const GSym&) const = default;

  static GSym term(char c) { return {true, c, {}}; }
  static GSym var(NonTerm n) { return {false, 0, n}; }
};

using Body = std::vector<GSym>;

struct Grammar {
  std::vector<std::string> functions;  // names, indexed by NonTerm::a for L and S
  std::map<NonTerm, std::vector<Body>> rules;

  void add(NonTerm head, Body body);
  const std::vector<Body>& productions(NonTerm n) const;
  std::string name(NonTerm n) const;
  /// One production per line, `D[pi3] -> 0b D[pi1]`, in a stable order.
  std::string dump() const;
};

/// Demand equations for a first-order program. Single-production chains are
/// inlined so simple recursions come out directly, e.g. `L[f,2] -> 0b | 2 L[f,2]`.
Grammar generate_equations(const Program& program);

/// Adds `CRIT` productions for a prefix-closed criterion over {0,1}. Every
/// D[π] then derives the demand at π for that criterion.
Grammar with_criterion(const Grammar& g, const Nfa& criterion);

/// with_criterion plus `D'[pt] -> D[pt] $`, the start symbol for point pt.
Grammar instantiate(const Grammar& g, Label pt, const Nfa& criterion);

/// Strings of length <= maxlen derivable from `start`. `$` is kept if present.
DemandSet eval_finite(const Grammar& g, NonTerm start, std::size_t maxlen);
/// The same bounded languages for every nonterminal with productions.
std::map<NonTerm, DemandSet> eval_finite_all(const Grammar& g, std::size_t maxlen);

}  // namespace fslice
