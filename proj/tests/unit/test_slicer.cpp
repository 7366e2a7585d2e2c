#include <doctest.h>

#include "fslice/artifact.hpp"
#include "fslice/slicer.hpp"
#include "support.hpp"

using namespace fslice;

namespace {

Program corpus(const std::string& name) {
  for (auto& c : testing::load_corpus())
    if (c.name == name) return c.program;
  FAIL("missing " << name);
  return {};
}

std::string golden(const std::string& name) { return testing::read_text(testing::golden_dir() + "/" + name); }

}  // namespace

TEST_CASE("running example residuals") {
  Program p = corpus("linecharcount");
  auto a = slice_noninc(p, parse_criterion("eps + 0"));
  CHECK(normalize_whitespace(print_program(a.residual)) == normalize_whitespace(golden("linecharcount_eps0.fsl")));
  auto b = slice_noninc(p, parse_criterion("eps + 1"));
  CHECK(normalize_whitespace(print_program(b.residual)) == normalize_whitespace(golden("linecharcount_eps1.fsl")));
}

TEST_CASE("membership of the first pinned label") {
  PrecomputeArtifact art = precompute(corpus("linecharcount"));
  CHECK(in_slice(art, Label{1}, parse_criterion("eps + 0").nfa));
  CHECK_FALSE(in_slice(art, Label{1}, parse_criterion("eps + 1").nfa));
  CHECK_FALSE(in_slice(art, Label{1}, parse_criterion("eps").nfa));
  CHECK_THROWS_AS(in_slice(art, Label{100000}, parse_criterion("eps").nfa), Error);
}

TEST_CASE("incremental and non-incremental keep maps agree") {
  for (const char* name : {"linecharcount", "mapsq", "sumlist", "swap"}) {
    Program p = corpus(name);
    PrecomputeArtifact art = precompute(p);
    for (const char* c : {"eps", "eps + 0", "eps + 1", "(0 + 1)*", "eps + 1 + 11 + 110"}) {
      CAPTURE(name);
      CAPTURE(c);
      Criterion crit = parse_criterion(c);
      auto inc = slice_inc(p, art, crit);
      auto non = slice_noninc(p, crit);
      CHECK(inc.keep == non.keep);
      CHECK(print_program(inc.residual) == print_program(non.residual));
    }
  }
}

TEST_CASE("thread count does not change the result") {
  Program p = corpus("sumlist");
  SliceOptions one, many;
  one.threads = 1;
  many.threads = 4;
  Nfa crit = parse_criterion("eps + 0").nfa;
  CHECK(keep_noninc(p, crit, one) == keep_noninc(p, crit, many));
  CHECK(save_artifact(precompute(p, one)) == save_artifact(precompute(p, many)));
}

TEST_CASE("artifacts round-trip and are byte-stable") {
  Program p = corpus("linecharcount");
  std::string a = save_artifact(precompute(p));
  CHECK(a == save_artifact(precompute(p)));
  PrecomputeArtifact back = load_artifact(a);
  CHECK(save_artifact(back) == a);
  CHECK(back.fingerprint == fingerprint(p));
  for (const char* c : {"eps", "eps + 0", "eps + 1"})
    CHECK(keep_inc(back, parse_criterion(c).nfa) == keep_noninc(p, parse_criterion(c).nfa));
}

TEST_CASE("stale artifacts are rejected") {
  PrecomputeArtifact art = precompute(corpus("linecharcount"));
  try {
    slice_inc(corpus("swap"), art, parse_criterion("eps"));
    FAIL("no mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Mismatch);
  }
}

TEST_CASE("malformed artifacts") {
  for (const char* text : {"", "{}", "[1]", "{\"fingerprint\":\"x\",\"automata\":{\"q\":{}}}",
                           "{\"fingerprint\":\"x\",\"automata\":{\"pi1\":{\"states\":[0],\"start\":3,\"finals\":[],\"trans\":[]}}}"}) {
    CAPTURE(text);
    try {
      load_artifact(text);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Artifact);
    }
  }
}

TEST_CASE("extract_residual") {
  Program p = parse_program("(define (main) (let a <- 1 in (let b <- 2 in (let c <- (cons a b) in (return c)))))");
  KeepMap all;
  for (const auto& s : collect_labels(p)) all[s.label] = true;
  CHECK(print_program(extract_residual(p, all)) == print_program(p));

  KeepMap some = all;
  some[Label{4}] = false;  // rhs of b
  some[Label{8}] = false;  // b inside cons
  std::string r = normalize_whitespace(print_program(extract_residual(p, some)));
  CHECK(r == normalize_whitespace("(define (main) (let a <- 1 in (let b <- □ in (let c <- (cons a □) in (return c)))))"));

  KeepMap missing = all;
  missing.erase(Label{3});
  CHECK_THROWS_AS(extract_residual(p, missing), Error);
}

TEST_CASE("fingerprints depend on labels and text") {
  Program a = parse_program("(define (main) (let x <- 1 in (return x)))");
  Program b = parse_program("(define (main) (let x <- 2 in (return x)))");
  CHECK(fingerprint(a) == fingerprint(a));
  CHECK(fingerprint(a) != fingerprint(b));
  CHECK(fingerprint(a).size() == 64);
}

TEST_CASE("criterion parsing") {
  CHECK(parse_criterion("eps + 0").nfa.size() > 0);
  CHECK(parse_criterion("0").closed_automatically);
  CHECK_FALSE(parse_criterion("eps + 0").closed_automatically);
  CHECK(accepts(parse_criterion("10").nfa, parse_debug("1")));
  CHECK_THROWS_AS(parse_criterion("10", true), Error);
  for (const char* bad : {"", "  ", "(0", "0+", "2", "*"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_criterion(bad), Error);
  }
  CHECK(equivalent(parse_criterion("eps + 1 + 11 + 110").nfa, parse_criterion("110").nfa));
  CHECK(equivalent(parse_criterion("ε+0").nfa, parse_criterion("eps + 0").nfa));
  CHECK(is_prefix_closed(parse_criterion("(01)*1").nfa));
}
