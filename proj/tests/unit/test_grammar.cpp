#include <doctest.h>

#include "fslice/criterion.hpp"
#include "fslice/grammar.hpp"
#include "support.hpp"

using namespace fslice;

namespace {

Program lcc() {
  for (auto& c : testing::load_corpus())
    if (c.name == "linecharcount") return c.program;
  FAIL("linecharcount missing");
  return {};
}

bool contains_line(const std::string& dump, const std::string& line) {
  return ("\n" + dump).find("\n" + line + "\n") != std::string::npos;
}

DemandSet set(std::initializer_list<const char*> xs) {
  DemandSet d;
  for (const char* x : xs) d.insert(parse_debug(x));
  return d;
}

}  // namespace

TEST_CASE("the running example yields the recursive summary") {
  std::string d = generate_equations(lcc()).dump();
  CHECK(contains_line(d, "L[linecharcount,2] -> 0b"));
  CHECK(contains_line(d, "L[linecharcount,2] -> 2 L[linecharcount,2]"));
  CHECK(contains_line(d, "D[pi1] -> L[linecharcount,2] S[linecharcount]"));
}

TEST_CASE("a constant main only copies the criterion") {
  Program p = parse_program("(define (main) (let x <- 1 in (return x)))");
  Grammar g = with_criterion(generate_equations(p), parse_criterion("eps + 0").nfa);
  // pi4 is the returned occurrence
  CHECK(eval_finite(g, NonTerm::demand_at(Label{4}), 4) == set({"eps", "0"}));
}

TEST_CASE("eval_finite on the running example") {
  Grammar g = with_criterion(generate_equations(lcc()), parse_criterion("eps + 0").nfa);
  DemandSet d = eval_finite(g, NonTerm::demand_at(Label{1}), 3);
  CHECK(d.contains(parse_debug("0b")));
  CHECK(d.contains(parse_debug("0b 0")));
  CHECK(d.contains(parse_debug("2 0b")));
  for (const SymString& s : d) CHECK(s.size() <= 3);
  Grammar eps = with_criterion(generate_equations(lcc()), Nfa::epsilon_language());
  CHECK(eval_finite(eps, NonTerm::demand_at(Label{1}), 3) == set({"0b", "2 0b", "2 2 0b"}));
}

TEST_CASE("criteria must be nonempty, prefix-closed selector languages") {
  Grammar g = generate_equations(lcc());
  CHECK_THROWS_AS(with_criterion(g, Nfa::empty_language()), Error);
  CHECK_THROWS_AS(with_criterion(g, parse_regex("0")), Error);
  CHECK_NOTHROW(with_criterion(g, parse_criterion("eps + 0").nfa));
}

TEST_CASE("instantiate adds the end marker and checks the label") {
  Grammar g = generate_equations(lcc());
  Grammar i = instantiate(g, Label{1}, parse_criterion("eps").nfa);
  CHECK(contains_line(i.dump(), "D'[pi1] -> D[pi1] $"));
  try {
    instantiate(g, Label{9999}, parse_criterion("eps").nfa);
    FAIL("unknown label accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownLabel);
  }
}

TEST_CASE("criterion languages compose with the criterion-free grammar") {
  // Bounded version of L(G^sigma) = L(G^eps) . sigma on a few points.
  Program p = lcc();
  Grammar base = generate_equations(p);
  Grammar eps = with_criterion(base, Nfa::epsilon_language());
  for (const char* c : {"eps + 0", "eps + 1 + 11", "(0 + 1)*"}) {
    Nfa crit = parse_criterion(c).nfa;
    Grammar g = with_criterion(base, crit);
    DemandSet sigma = enumerate_upto(crit, 6);
    for (std::uint32_t id : {1u, 2u, 10u, 24u}) {
      CAPTURE(c);
      CAPTURE(id);
      DemandSet left = eval_finite(g, NonTerm::demand_at(Label{id}), 6);
      DemandSet right;
      for (const SymString& u : eval_finite(eps, NonTerm::demand_at(Label{id}), 6))
        for (const SymString& s : sigma)
          if (u.size() + s.size() <= 6) right.insert(u + s);
      CHECK(left == right);
    }
  }
}
