#include "fslice/lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fslice {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::NotAnf: return "not in ANF";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::Runtime: return "runtime error";
    case ErrorKind::HoleObserved: return "hole observed";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::Criterion: return "criterion error";
    case ErrorKind::Artifact: return "artifact error";
    case ErrorKind::Mismatch: return "fingerprint mismatch";
    case ErrorKind::UnknownLabel: return "unknown label";
    case ErrorKind::FirstifyUnsupported: return "firstify unsupported";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

std::string to_string(Label label) { return "pi" + std::to_string(label.id); }

namespace {

constexpr std::string_view kPi = "\xCF\x80";      // π
constexpr std::string_view kHole = "\xE2\x96\xA1";  // □
constexpr std::string_view kArrow = "\xE2\x86\x90";  // ←

std::optional<std::uint32_t> parse_uint(std::string_view digits) {
  if (digits.empty()) return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Label> parse_label(std::string_view text) {
  if (text.starts_with(kPi)) {
    text.remove_prefix(kPi.size());
  } else if (text.starts_with("pi")) {
    text.remove_prefix(2);
  }
  if (auto id = parse_uint(text); id && *id > 0) return Label{*id};
  return std::nullopt;
}

const char* to_string(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
    case PrimOp::Mul: return "*";
    case PrimOp::Eq: return "eq?";
  }
  return "?";
}

bool is_primitive_name(std::string_view name) {
  static const std::set<std::string_view> names = {"cons", "car", "cdr", "null?", "+", "-", "*", "eq?"};
  return names.contains(name);
}

namespace {

bool is_keyword(std::string_view name) {
  static const std::set<std::string_view> words = {"define", "let", "in", "if", "return", "nil", "<-", "_"};
  return words.contains(name) || name == kArrow || name == kHole;
}

}  // namespace

const FunDef* Program::find(std::string_view name) const {
  for (const auto& def : defs)
    if (def.name == name) return &def;
  return nullptr;
}

std::optional<std::size_t> Program::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < defs.size(); ++i)
    if (defs[i].name == name) return i;
  return std::nullopt;
}

const FunDef& Program::main() const {
  if (const FunDef* def = find("main")) return *def;
  throw Error(ErrorKind::Validation, "program has no main function");
}

namespace {

bool same_expr(const Program& a, ExprId ia, const Program& b, ExprId ib) {
  const Expr& x = a.expr(ia);
  const Expr& y = b.expr(ib);
  if (x.kind != y.kind || x.label != y.label || x.pinned != y.pinned || !(x.subject == y.subject) ||
      x.bound != y.bound || !(x.rhs == y.rhs))
    return false;
  switch (x.kind) {
    case ExprKind::If: return same_expr(a, x.first, b, y.first) && same_expr(a, x.second, b, y.second);
    case ExprKind::Let: return same_expr(a, x.first, b, y.first);
    case ExprKind::Return: return true;
  }
  return false;
}

}  // namespace

bool Program::same_as(const Program& other) const {
  if (defs.size() != other.defs.size()) return false;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (defs[i].name != other.defs[i].name || defs[i].params != other.defs[i].params) return false;
    if (!same_expr(*this, defs[i].body, other, other.defs[i].body)) return false;
  }
  return true;
}

void for_each_expr(const Program& program, ExprId root,
                   const std::function<void(ExprId, const Expr&)>& fn) {
  std::vector<ExprId> stack{root};
  while (!stack.empty()) {
    ExprId id = stack.back();
    stack.pop_back();
    const Expr& e = program.expr(id);
    fn(id, e);
    if (e.kind == ExprKind::If) {
      stack.push_back(e.second);
      stack.push_back(e.first);
    } else if (e.kind == ExprKind::Let) {
      stack.push_back(e.first);
    }
  }
}

std::vector<LabelSite> collect_labels(const Program& program) {
  std::vector<LabelSite> sites;
  for (std::size_t f = 0; f < program.defs.size(); ++f) {
    for_each_expr(program, program.defs[f].body, [&](ExprId id, const Expr& e) {
      sites.push_back({e.label, SiteKind::Expr, f, id, -1});
      switch (e.kind) {
        case ExprKind::If:
        case ExprKind::Return:
          sites.push_back({e.subject.label, SiteKind::Occurrence, f, id, -1});
          break;
        case ExprKind::Let:
          sites.push_back({e.rhs.label, SiteKind::App, f, id, -1});
          for (std::size_t i = 0; i < e.rhs.args.size(); ++i)
            sites.push_back({e.rhs.args[i].label, SiteKind::Occurrence, f, id, static_cast<int>(i)});
          break;
      }
    });
  }
  return sites;
}

//===----------------------------------------------------------------------===//
// Reader
//===----------------------------------------------------------------------===//

namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int col = 0;
  std::optional<std::uint32_t> pin;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what, int line, int col) const {
    std::ostringstream os;
    os << line << ":" << col << ": " << what;
    throw Error(ErrorKind::Syntax, os.str());
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  // Consumes an optional `πN:` / `piN:` prefix.
  std::optional<std::uint32_t> read_pin() {
    std::string_view rest = text_.substr(pos_);
    std::size_t skip = 0;
    if (rest.starts_with(kPi)) {
      skip = kPi.size();
    } else if (rest.starts_with("pi")) {
      skip = 2;
    } else {
      return std::nullopt;
    }
    std::size_t end = skip;
    while (end < rest.size() && std::isdigit(static_cast<unsigned char>(rest[end]))) ++end;
    if (end == skip || end >= rest.size() || rest[end] != ':') return std::nullopt;
    auto id = parse_uint(rest.substr(skip, end - skip));
    if (!id || *id == 0) fail("label pins start at 1", line_, col_);
    for (std::size_t i = 0; i <= end; ++i) advance();
    return id;
  }

  SExpr read() {
    SExpr node;
    node.pin = read_pin();
    node.line = line_;
    node.col = col_;
    if (pos_ >= text_.size()) fail("unexpected end of input", line_, col_);
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'", line_, col_);
    if (c == '(') {
      node.is_list = true;
      advance();
      skip_space();
      while (true) {
        if (pos_ >= text_.size()) fail("unclosed '('", node.line, node.col);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
        skip_space();
      }
      return node;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      advance();
    }
    node.atom = std::string(text_.substr(start, pos_ - start));
    if (node.atom == kHole) node.atom = "_";
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

//===----------------------------------------------------------------------===//
// AST construction
//===----------------------------------------------------------------------===//

class Builder {
 public:
  explicit Builder(const ParseOptions& options) : options_(options) {}

  Program build(const std::vector<SExpr>& forms) {
    for (const SExpr& form : forms) build_define(form);
    assign_labels();
    return std::move(program_);
  }

 private:
  [[noreturn]] static void fail(ErrorKind kind, const SExpr& at, const std::string& what) {
    std::ostringstream os;
    os << at.line << ":" << at.col << ": " << what;
    throw Error(kind, os.str());
  }

  static bool is_hole(const SExpr& s) { return !s.is_list && s.atom == "_"; }

  Label pin_of(const SExpr& s, bool& pinned) {
    pinned = s.pin.has_value();
    return Label{s.pin.value_or(0)};
  }

  void build_define(const SExpr& form) {
    if (!form.is_list || form.items.size() != 3 || form.items[0].is_list || form.items[0].atom != "define")
      fail(ErrorKind::Syntax, form, "expected (define (name params...) body)");
    const SExpr& header = form.items[1];
    if (!header.is_list || header.items.empty() || header.items[0].is_list)
      fail(ErrorKind::Syntax, header, "expected (name params...)");
    FunDef def;
    def.name = header.items[0].atom;
    for (std::size_t i = 1; i < header.items.size(); ++i) {
      const SExpr& p = header.items[i];
      if (p.is_list) fail(ErrorKind::Syntax, p, "parameter must be a name");
      if (is_hole(p)) {
        if (!options_.allow_holes) fail(ErrorKind::Syntax, p, "hole outside a residual program");
        def.params.push_back({"", true});
      } else {
        def.params.push_back({p.atom, false});
      }
    }
    def.body = build_expr(form.items[2]);
    program_.defs.push_back(std::move(def));
  }

  VarRef build_var(const SExpr& s, const char* role) {
    if (s.is_list) fail(ErrorKind::NotAnf, s, std::string(role) + " must be a variable (nested application)");
    VarRef v;
    v.label = pin_of(s, v.pinned);
    if (is_hole(s)) {
      if (!options_.allow_holes) fail(ErrorKind::Syntax, s, "hole outside a residual program");
      v.hole = true;
    } else {
      if (s.atom.empty() || is_keyword(s.atom)) fail(ErrorKind::Syntax, s, "expected a variable, got '" + s.atom + "'");
      v.name = s.atom;
    }
    return v;
  }

  ExprId build_expr(const SExpr& s) {
    if (!s.is_list || s.items.empty() || s.items[0].is_list)
      fail(ErrorKind::Syntax, s, "expected (if ...), (let ...) or (return ...)");
    Expr e;
    e.label = pin_of(s, e.pinned);
    const std::string& head = s.items[0].atom;
    if (head == "return") {
      if (s.items.size() != 2) fail(ErrorKind::Syntax, s, "return takes one variable");
      e.kind = ExprKind::Return;
      e.subject = build_var(s.items[1], "returned value");
    } else if (head == "if") {
      if (s.items.size() != 4) fail(ErrorKind::Syntax, s, "expected (if x e1 e2)");
      e.kind = ExprKind::If;
      e.subject = build_var(s.items[1], "condition");
      e.first = build_expr(s.items[2]);
      e.second = build_expr(s.items[3]);
    } else if (head == "let") {
      if (s.items.size() != 6 || s.items[1].is_list || s.items[2].is_list ||
          (s.items[2].atom != "<-" && s.items[2].atom != kArrow) || s.items[4].is_list || s.items[4].atom != "in")
        fail(ErrorKind::Syntax, s, "expected (let x <- app in e)");
      e.kind = ExprKind::Let;
      if (is_keyword(s.items[1].atom)) fail(ErrorKind::Syntax, s.items[1], "cannot bind '" + s.items[1].atom + "'");
      e.bound = s.items[1].atom;
      e.rhs = build_app(s.items[3]);
      e.first = build_expr(s.items[5]);
    } else {
      fail(ErrorKind::Syntax, s, "expected an expression, got '" + head + "'");
    }
    program_.exprs.push_back(std::move(e));
    return static_cast<ExprId>(program_.exprs.size() - 1);
  }

  App build_app(const SExpr& s) {
    App a;
    a.label = pin_of(s, a.pinned);
    if (!s.is_list) {
      if (is_hole(s)) {
        if (!options_.allow_holes) fail(ErrorKind::Syntax, s, "hole outside a residual program");
        a.kind = AppKind::Hole;
        return a;
      }
      if (s.atom == "nil") {
        a.kind = AppKind::Nil;
        return a;
      }
      std::int64_t value = 0;
      const char* first = s.atom.data();
      const char* last = first + s.atom.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) {
        a.kind = AppKind::Const;
        a.value = value;
        return a;
      }
      fail(ErrorKind::Syntax, s, "a bare variable is not an application: '" + s.atom + "'");
    }
    if (s.items.empty() || s.items[0].is_list) fail(ErrorKind::NotAnf, s, "application head must be a name");
    const std::string& head = s.items[0].atom;
    auto expect_args = [&](std::size_t n) {
      if (s.items.size() != n + 1)
        fail(ErrorKind::Syntax, s, "'" + head + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (head == "cons") {
      a.kind = AppKind::Cons;
      expect_args(2);
    } else if (head == "car") {
      a.kind = AppKind::Car;
      expect_args(1);
    } else if (head == "cdr") {
      a.kind = AppKind::Cdr;
      expect_args(1);
    } else if (head == "null?") {
      a.kind = AppKind::NullQ;
      expect_args(1);
    } else if (head == "+" || head == "-" || head == "*" || head == "eq?") {
      a.kind = AppKind::Prim;
      a.op = head == "+" ? PrimOp::Add : head == "-" ? PrimOp::Sub : head == "*" ? PrimOp::Mul : PrimOp::Eq;
      expect_args(2);
    } else {
      if (is_keyword(head)) fail(ErrorKind::Syntax, s, "unexpected '" + head + "' in application position");
      a.kind = AppKind::Call;
      a.callee = head;
    }
    for (std::size_t i = 1; i < s.items.size(); ++i) a.args.push_back(build_var(s.items[i], "argument"));
    return a;
  }

  void assign_labels() {
    std::set<std::uint32_t> pins;
    auto note = [&](const Label& l, bool pinned) {
      if (!pinned) return;
      if (!pins.insert(l.id).second)
        throw Error(ErrorKind::Syntax, "label pin " + to_string(l) + " used more than once");
    };
    visit([&](Label& l, bool pinned) { note(l, pinned); });
    std::uint32_t next = 1;
    visit([&](Label& l, bool pinned) {
      if (pinned) return;
      while (pins.contains(next)) ++next;
      l.id = next++;
    });
  }

  template <class F>
  void visit(F&& f) {
    for (FunDef& def : program_.defs) visit_expr(def.body, f);
  }

  template <class F>
  void visit_expr(ExprId id, F& f) {
    Expr& e = program_.exprs[id];
    f(e.label, e.pinned);
    switch (e.kind) {
      case ExprKind::If:
        f(e.subject.label, e.subject.pinned);
        visit_expr(e.first, f);
        visit_expr(e.second, f);
        break;
      case ExprKind::Let:
        f(e.rhs.label, e.rhs.pinned);
        for (VarRef& v : e.rhs.args) f(v.label, v.pinned);
        visit_expr(e.first, f);
        break;
      case ExprKind::Return:
        f(e.subject.label, e.subject.pinned);
        break;
    }
  }

  const ParseOptions& options_;
  Program program_;
};

}  // namespace

Program parse_program(std::string_view text, const ParseOptions& options) {
  Reader reader(text);
  Program program = Builder(options).build(reader.read_all());
  if (options.validate) {
    auto diags = validate(program, options.higher_order, options.allow_holes);
    if (!diags.empty()) {
      std::string msg;
      for (const auto& d : diags) {
        if (!msg.empty()) msg += "; ";
        msg += d.message;
      }
      throw Error(ErrorKind::Validation, msg);
    }
  }
  return program;
}

//===----------------------------------------------------------------------===//
// Validation
//===----------------------------------------------------------------------===//

std::vector<Diagnostic> validate(const Program& program, bool higher_order, bool allow_holes) {
  std::vector<Diagnostic> out;
  auto diag = [&](std::string code, std::string message) { out.push_back({std::move(code), std::move(message)}); };

  std::set<std::string> fnames;
  for (const FunDef& def : program.defs) {
    if (!fnames.insert(def.name).second) diag("duplicate-function", "function '" + def.name + "' defined twice");
    if (is_primitive_name(def.name) || is_keyword(def.name))
      diag("reserved-name", "'" + def.name + "' cannot name a function");
  }
  if (const FunDef* m = program.find("main")) {
    if (!m->params.empty()) diag("main-arity", "main must take no parameters");
  } else {
    diag("no-main", "program has no main function");
  }

  std::set<std::string> variables;
  auto bind = [&](const std::string& name, const std::string& where) {
    if (name.empty()) return;
    if (!variables.insert(name).second)
      diag("duplicate-variable", "variable '" + name + "' bound more than once (in " + where + ")");
    if (fnames.contains(name) || is_primitive_name(name))
      diag("name-clash", "variable '" + name + "' clashes with a function name");
  };

  std::set<std::uint32_t> labels;
  for (const LabelSite& site : collect_labels(program)) {
    if (!labels.insert(site.label.id).second) diag("duplicate-label", "label " + to_string(site.label) + " is not unique");
  }

  for (const FunDef& def : program.defs) {
    std::set<std::string> params;
    for (const Param& p : def.params) {
      if (p.hole) {
        if (!allow_holes) diag("hole", "hole parameter in '" + def.name + "'");
        continue;
      }
      if (!params.insert(p.name).second) diag("duplicate-parameter", "parameter '" + p.name + "' repeated in '" + def.name + "'");
      bind(p.name, def.name);
    }

    // Scope walk; variables are unique so one growing scope per path suffices.
    std::vector<std::pair<ExprId, std::vector<std::string>>> stack;
    std::vector<std::string> initial;
    for (const Param& p : def.params)
      if (!p.hole) initial.push_back(p.name);
    stack.push_back({def.body, initial});
    while (!stack.empty()) {
      auto [id, scope] = std::move(stack.back());
      stack.pop_back();
      const Expr& e = program.expr(id);
      auto in_scope = [&](const std::string& n) { return std::find(scope.begin(), scope.end(), n) != scope.end(); };
      auto check_use = [&](const VarRef& v, bool function_value_ok) {
        if (v.hole) {
          if (!allow_holes) diag("hole", "hole occurrence " + to_string(v.label) + " in '" + def.name + "'");
          return;
        }
        if (in_scope(v.name)) return;
        if (function_value_ok && higher_order && (fnames.contains(v.name) || is_primitive_name(v.name))) return;
        if (fnames.contains(v.name) || is_primitive_name(v.name)) {
          diag("higher-order", "function '" + v.name + "' used as a value in '" + def.name + "'");
          return;
        }
        diag("unbound-variable", "unbound variable '" + v.name + "' in '" + def.name + "'");
      };
      switch (e.kind) {
        case ExprKind::Return:
          check_use(e.subject, false);
          break;
        case ExprKind::If:
          check_use(e.subject, false);
          stack.push_back({e.second, scope});
          stack.push_back({e.first, scope});
          break;
        case ExprKind::Let: {
          const App& a = e.rhs;
          if (a.kind == AppKind::Hole && !allow_holes) diag("hole", "hole application in '" + def.name + "'");
          if (a.kind == AppKind::Call) {
            for (const VarRef& v : a.args) check_use(v, true);
            if (const FunDef* callee = program.find(a.callee)) {
              bool ok = higher_order ? a.args.size() <= callee->params.size() : a.args.size() == callee->params.size();
              if (!ok)
                diag("arity", "call to '" + a.callee + "' with " + std::to_string(a.args.size()) + " argument(s), expected " +
                                  std::to_string(callee->params.size()));
            } else if (higher_order && in_scope(a.callee)) {
              // variable callee, resolved by firstification
            } else {
              diag("unknown-function", "call to undefined function '" + a.callee + "' in '" + def.name + "'");
            }
          } else {
            for (const VarRef& v : a.args) check_use(v, false);
          }
          bind(e.bound, def.name);
          scope.push_back(e.bound);
          stack.push_back({e.first, std::move(scope)});
          break;
        }
      }
    }
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Printing
//===----------------------------------------------------------------------===//

namespace {

class Printer {
 public:
  Printer(const Program& p, bool show) : p_(p), show_(show) {}

  std::string run() {
    for (std::size_t i = 0; i < p_.defs.size(); ++i) {
      const FunDef& def = p_.defs[i];
      if (i) os_ << "\n";
      os_ << "(define (" << def.name;
      for (const Param& param : def.params) os_ << " " << (param.hole ? std::string(kHole) : param.name);
      os_ << ")\n  ";
      expr(def.body, 2);
      os_ << ")\n";
    }
    return os_.str();
  }

 private:
  void label(Label l, bool pinned) {
    if (show_ || pinned) os_ << kPi << l.id << ":";
  }

  void var(const VarRef& v) {
    label(v.label, v.pinned);
    if (v.hole)
      os_ << kHole;
    else
      os_ << v.name;
  }

  void app(const App& a) {
    label(a.label, a.pinned);
    switch (a.kind) {
      case AppKind::Hole: os_ << kHole; return;
      case AppKind::Const: os_ << a.value; return;
      case AppKind::Nil: os_ << "nil"; return;
      case AppKind::Cons: os_ << "(cons"; break;
      case AppKind::Car: os_ << "(car"; break;
      case AppKind::Cdr: os_ << "(cdr"; break;
      case AppKind::NullQ: os_ << "(null?"; break;
      case AppKind::Prim: os_ << "(" << to_string(a.op); break;
      case AppKind::Call: os_ << "(" << a.callee; break;
    }
    for (const VarRef& v : a.args) {
      os_ << " ";
      var(v);
    }
    os_ << ")";
  }

  void newline(int indent) { os_ << "\n" << std::string(static_cast<std::size_t>(indent), ' '); }

  void expr(ExprId id, int indent) {
    const Expr& e = p_.expr(id);
    label(e.label, e.pinned);
    switch (e.kind) {
      case ExprKind::Return:
        os_ << "(return ";
        var(e.subject);
        os_ << ")";
        break;
      case ExprKind::If:
        os_ << "(if ";
        var(e.subject);
        newline(indent + 2);
        expr(e.first, indent + 2);
        newline(indent + 2);
        expr(e.second, indent + 2);
        os_ << ")";
        break;
      case ExprKind::Let:
        os_ << "(let " << e.bound << " <- ";
        app(e.rhs);
        os_ << " in";
        newline(indent);
        expr(e.first, indent);
        os_ << ")";
        break;
    }
  }

  const Program& p_;
  bool show_;
  std::ostringstream os_;
};

}  // namespace

std::string print_program(const Program& program, bool show_labels) { return Printer(program, show_labels).run(); }

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty() && out.back() != '(' && c != ')') out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace fslice
