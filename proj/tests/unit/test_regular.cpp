#include <doctest.h>

#include "fslice/grammar.hpp"
#include "fslice/regular.hpp"
#include "support.hpp"

using namespace fslice;

namespace {

DemandSet set(std::initializer_list<const char*> xs) {
  DemandSet d;
  for (const char* x : xs) d.insert(parse_debug(x));
  return d;
}

// 2* 0b
Nfa two_star_bar0() {
  Nfa a;
  a.start = a.add_state(false);
  StateId f = a.add_state(true);
  a.add(a.start, Sym::Two, a.start);
  a.add(a.start, Sym::Bar0, f);
  return a;
}

Nfa zero_star() {
  Nfa a;
  a.start = a.add_state(true);
  a.add(a.start, Sym::Sel0, a.start);
  return a;
}

const char* kWorked = "1 2 0b 0 0 2 0 1b 1b 1 0b";

}  // namespace

TEST_CASE("enumeration") {
  CHECK(enumerate_upto(zero_star(), 2) == set({"eps", "0", "0 0"}));
  CHECK(enumerate_upto(Nfa::empty_language(), 5).empty());
  CHECK(enumerate_upto(two_star_bar0(), 3) == set({"0b", "2 0b", "2 2 0b"}));
}

TEST_CASE("simplify_nfa examples") {
  CHECK(equivalent(simplify_nfa(from_strings(set({"0b 0"}))), Nfa::epsilon_language()));
  CHECK(is_empty(simplify_nfa(from_strings(set({kWorked})))));
  Nfa a = concat(two_star_bar0(), from_strings(set({"eps", "0"})));
  CHECK(equivalent(simplify_nfa(a), Nfa::epsilon_language()));
}

TEST_CASE("canonicalize_nfa examples") {
  CHECK(enumerate_upto(canonicalize_nfa(from_strings(set({kWorked}))), 12) == set({"1 2 0 2 0 1b 0b"}));
  CHECK(equivalent(canonicalize_nfa(two_star_bar0()), two_star_bar0()));
  Nfa plain = from_strings(set({"eps", "0 2", "2 1 1"}));
  CHECK(equivalent(canonicalize_nfa(plain), plain));
}

TEST_CASE("completing automaton") {
  Nfa comp = completing_automaton(remove_epsilon(canonicalize_nfa(two_star_bar0())));
  CHECK(equivalent(comp, from_strings(set({"0"}))));
  CHECK(intersect_nonempty(comp, from_strings(set({"eps", "0"}))));
  CHECK_FALSE(intersect_nonempty(comp, from_strings(set({"eps", "1"}))));
  CHECK_FALSE(intersect_nonempty(comp, Nfa::epsilon_language()));

  Nfa eps = completing_automaton(Nfa::epsilon_language());
  CHECK(equivalent(eps, Nfa::epsilon_language()));

  Nfa bars = completing_automaton(remove_epsilon(canonicalize_nfa(from_strings(set({"1b 0b"})))));
  CHECK(equivalent(bars, from_strings(set({"0 1"}))));
}

TEST_CASE("completing automaton rejects non-canonical input") {
  CHECK_THROWS(completing_automaton(from_strings(set({"0b 1"}))));
}

TEST_CASE("Mohri-Nederhof keeps regular grammars exact") {
  Grammar g;
  NonTerm a = NonTerm::criterion();
  g.add(a, {GSym::term('0'), GSym::var(a)});
  g.add(a, {});
  CHECK(equivalent(mohri_nederhof(g, a), zero_star()));

  // L -> 0b | 2 L
  Grammar h;
  NonTerm l = NonTerm::fn_demand(0);
  h.functions = {"f"};
  h.add(l, {GSym::term('a')});
  h.add(l, {GSym::term('2'), GSym::var(l)});
  CHECK(equivalent(mohri_nederhof(h, l), two_star_bar0()));
}

TEST_CASE("Mohri-Nederhof over-approximates a self-embedding grammar") {
  // S -> eps | 1 S 1b : approximated by 1* 1b*
  Grammar g;
  NonTerm s = NonTerm::criterion();
  g.add(s, {});
  g.add(s, {GSym::term('1'), GSym::var(s), GSym::term('b')});
  Nfa m = mohri_nederhof(g, s);
  for (const SymString& w : eval_finite(g, s, 8)) CHECK(accepts(m, w));
  CHECK(accepts(m, parse_debug("1 1 1b")));
  CHECK_FALSE(accepts(m, parse_debug("1b 1")));
}

TEST_CASE("the mapsq summary is approximated as documented") {
  // eps | 1^n 1b^n | 1^n 0 2 0b 1b^n
  Grammar g;
  NonTerm s = NonTerm::criterion();
  g.add(s, {});
  g.add(s, {GSym::term('1'), GSym::var(s), GSym::term('b')});
  g.add(s, {GSym::term('0'), GSym::term('2'), GSym::term('a')});
  Nfa m = mohri_nederhof(g, s);
  CHECK(accepts(m, parse_debug("1 1 1b")));
  CHECK(accepts(m, parse_debug("1 0 2 0b 1b 1b 1b")));
  CHECK_FALSE(accepts(m, parse_debug("0 1")));
}

TEST_CASE("intersection is stable under minimization") {
  Nfa comp = completing_automaton(remove_epsilon(canonicalize_nfa(two_star_bar0())));
  Nfa crit = from_strings(set({"eps", "0", "0 1"}));
  CHECK(intersect_nonempty(comp, crit) == intersect_nonempty(minimize(comp), minimize(crit)));
}

TEST_CASE("NFA algebra") {
  Nfa a = from_strings(set({"0", "1 1"}));
  CHECK(is_prefix_closed(prefix_close(a)));
  CHECK_FALSE(is_prefix_closed(a));
  CHECK(enumerate_upto(union_of(a, zero_star()), 2) == set({"eps", "0", "0 0", "1 1"}));
  CHECK(equivalent(determinize(a), a));
  CHECK(over_selectors(a));
  CHECK_FALSE(over_selectors(two_star_bar0()));
}
