#include "fslice/criterion.hpp"

#include <cctype>

#include "fslice/error.hpp"

namespace fslice {

namespace {

struct Fragment {
  StateId in, out;
};

class RegexParser {
 public:
  explicit RegexParser(std::string_view text) : text_(text) {}

  Nfa run() {
    skip();
    if (pos_ == text_.size()) fail("empty criterion");
    Fragment f = alternation();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    nfa_.start = f.in;
    nfa_.finals[f.out] = true;
    return trim(nfa_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Criterion, "bad criterion '" + std::string(text_) + "': " + what + " at offset " +
                                          std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_atom() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '0' || c == '1' || c == '(' || text_.substr(pos_).starts_with("eps") ||
           text_.substr(pos_).starts_with("\xCE\xB5");
  }

  Fragment alternation() {
    Fragment left = sequence();
    skip();
    while (pos_ < text_.size() && text_[pos_] == '+') {
      ++pos_;
      Fragment right = sequence();
      Fragment f{nfa_.add_state(), nfa_.add_state()};
      nfa_.add(f.in, Sym::Eps, left.in);
      nfa_.add(f.in, Sym::Eps, right.in);
      nfa_.add(left.out, Sym::Eps, f.out);
      nfa_.add(right.out, Sym::Eps, f.out);
      left = f;
      skip();
    }
    return left;
  }

  Fragment sequence() {
    if (!at_atom()) fail("expected 0, 1, eps or '('");
    Fragment f = starred();
    while (at_atom()) {
      Fragment g = starred();
      nfa_.add(f.out, Sym::Eps, g.in);
      f.out = g.out;
    }
    return f;
  }

  Fragment starred() {
    Fragment f = atom();
    skip();
    while (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      Fragment g{nfa_.add_state(), nfa_.add_state()};
      nfa_.add(g.in, Sym::Eps, f.in);
      nfa_.add(g.in, Sym::Eps, g.out);
      nfa_.add(f.out, Sym::Eps, f.in);
      nfa_.add(f.out, Sym::Eps, g.out);
      f = g;
      skip();
    }
    return f;
  }

  Fragment atom() {
    skip();
    Fragment f{nfa_.add_state(), nfa_.add_state()};
    std::string_view rest = text_.substr(pos_);
    if (rest.starts_with("eps")) {
      pos_ += 3;
      nfa_.add(f.in, Sym::Eps, f.out);
    } else if (rest.starts_with("\xCE\xB5")) {
      pos_ += 2;
      nfa_.add(f.in, Sym::Eps, f.out);
    } else if (rest[0] == '0' || rest[0] == '1') {
      nfa_.add(f.in, rest[0] == '0' ? Sym::Sel0 : Sym::Sel1, f.out);
      ++pos_;
    } else if (rest[0] == '(') {
      ++pos_;
      Fragment inner = alternation();
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return inner;
    } else {
      fail("unexpected input");
    }
    return f;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Nfa nfa_;
};

}  // namespace

Nfa parse_regex(std::string_view text) { return RegexParser(text).run(); }

Criterion parse_criterion(std::string_view text, bool strict) {
  Criterion c;
  c.text = std::string(text);
  Nfa nfa = parse_regex(text);
  if (is_empty(nfa)) throw Error(ErrorKind::Criterion, "criterion '" + c.text + "' denotes the empty set");
  if (!is_prefix_closed(nfa)) {
    if (strict) throw Error(ErrorKind::Criterion, "criterion '" + c.text + "' is not prefix-closed");
    nfa = prefix_close(nfa);
    c.closed_automatically = true;
  }
  c.nfa = std::move(nfa);
  return c;
}

}  // namespace fslice
