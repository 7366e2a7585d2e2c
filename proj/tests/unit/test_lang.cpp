#include <doctest.h>

#include "fslice/lang.hpp"
#include "support.hpp"

using namespace fslice;

namespace {

const char* kTiny = "(define (main) (let x <- 1 in (return x)))";

ErrorKind kind_of(const std::string& text, const ParseOptions& po = {}) {
  try {
    parse_program(text, po);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error for: " << text);
  return ErrorKind::Io;
}

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("labels are assigned in pre-order") {
  Program p = parse_program(kTiny);
  auto sites = collect_labels(p);
  REQUIRE(sites.size() == 4);
  CHECK(sites[0].kind == SiteKind::Expr);
  CHECK(sites[1].kind == SiteKind::App);
  CHECK(sites[2].kind == SiteKind::Expr);
  CHECK(sites[3].kind == SiteKind::Occurrence);
  for (std::size_t i = 0; i < sites.size(); ++i) CHECK(sites[i].label.id == i + 1);
}

TEST_CASE("pinned labels are kept and others skip them") {
  Program p = parse_program("(define (main) π2:(let x <- 1 in (return pi1:x)))");
  auto sites = collect_labels(p);
  REQUIRE(sites.size() == 4);
  CHECK(sites[0].label.id == 2);
  CHECK(sites[1].label.id == 3);
  CHECK(sites[2].label.id == 4);
  CHECK(sites[3].label.id == 1);
  CHECK(kind_of("(define (main) π1:(let x <- 1 in (return pi1:x)))") == ErrorKind::Syntax);
}

TEST_CASE("label text") {
  CHECK(to_string(Label{7}) == "pi7");
  CHECK(parse_label("pi7") == Label{7});
  CHECK(parse_label("π12") == Label{12});
  CHECK(parse_label("3") == Label{3});
  CHECK_FALSE(parse_label("p7").has_value());
  CHECK_FALSE(parse_label("").has_value());
}

TEST_CASE("print then parse is a fixpoint on the corpus") {
  for (const auto& c : testing::load_corpus()) {
    CAPTURE(c.name);
    Program again = parse_program(print_program(c.program));
    CHECK(again.same_as(c.program));
    std::string text = print_program(c.program, true);
    CHECK(print_program(parse_program(text), true) == text);
  }
}

TEST_CASE("both arrows and comments are accepted") {
  Program a = parse_program("; c\n(define (main) (let x ← 1 in (return x))) ; trailing");
  Program b = parse_program(kTiny);
  CHECK(a.same_as(b));
}

TEST_CASE("nested applications are not ANF") {
  CHECK(kind_of("(define (f x) (return x)) (define (main) (let y <- (f (f 1)) in (return y)))") ==
        ErrorKind::NotAnf);
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("(define (main)\n  (let x <- 1 in (return x))");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(std::string(e.what()).find(':') != std::string::npos);
  }
}

TEST_CASE("validation diagnostics") {
  ParseOptions lax;
  lax.validate = false;
  auto diag = [&](const std::string& text) { return validate(parse_program(text, lax)); };
  CHECK(has_code(diag("(define (f x) (return x))"), "no-main"));
  CHECK(has_code(diag("(define (main) (return y))"), "unbound-variable"));
  CHECK(has_code(diag("(define (main) (let x <- 1 in (let x <- 2 in (return x))))"), "duplicate-variable"));
  CHECK(has_code(diag("(define (f a a) (return a)) (define (main) (let x <- 1 in (return x)))"),
                 "duplicate-parameter"));
  CHECK(has_code(diag("(define (main) (let x <- (g) in (return x)))"), "unknown-function"));
  CHECK(has_code(diag("(define (f a) (return a)) (define (main) (let x <- (f) in (return x)))"), "arity"));
  CHECK(has_code(diag("(define (main x) (return x))"), "main-arity"));
  CHECK(diag(kTiny).empty());
  CHECK(kind_of("(define (main) (return y))") == ErrorKind::Validation);
}

TEST_CASE("holes need allow_holes") {
  std::string text = "(define (main) (let x <- □ in (return x)))";
  CHECK(kind_of(text) == ErrorKind::Syntax);
  ParseOptions po;
  po.allow_holes = true;
  Program p = parse_program(text, po);
  CHECK(p.expr(p.main().body).rhs.kind == AppKind::Hole);
  CHECK(normalize_whitespace(print_program(p)) == normalize_whitespace(text));
}

TEST_CASE("higher-order programs need the higher_order option") {
  std::string text = "(define (ap f x) (let y <- (f x) in (return y)))"
                     "(define (main) (let a <- 1 in (let b <- (ap car a) in (return b))))";
  CHECK(kind_of(text) == ErrorKind::Validation);
  ParseOptions po;
  po.higher_order = true;
  CHECK_NOTHROW(parse_program(text, po));
}

TEST_CASE("normalize_whitespace") {
  CHECK(normalize_whitespace("  (a\n   b)\t\n") == "(a b)");
  CHECK(normalize_whitespace("( a )") == normalize_whitespace("(a)"));
}
