#include "fslice/firstify.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <set>
#include <unordered_map>

namespace fslice {

namespace {

struct FnDesc;
using FnRef = std::shared_ptr<const FnDesc>;

// What a functional variable stands for. Partial applications remember which
// supplied arguments were functions; the others are captured in the env list.
struct FnDesc {
  enum class Kind { Named, Prim, Partial };
  Kind kind = Kind::Named;
  std::string name;
  std::vector<FnRef> supplied;  // Partial: nullptr marks a captured data argument
  std::string display;

  std::string key() const {
    switch (kind) {
      case Kind::Named: return name;
      case Kind::Prim: return "prim:" + name;
      case Kind::Partial: {
        std::string k = "partial:" + name + "(";
        for (const FnRef& s : supplied) k += (s ? s->key() : "_") + ",";
        return k + ")";
      }
    }
    return "";
  }
  std::size_t captured() const { return std::count(supplied.begin(), supplied.end(), nullptr); }
};

std::string prim_display(const std::string& op) {
  if (op == "+") return "add";
  if (op == "-") return "sub";
  if (op == "*") return "mul";
  if (op == "eq?") return "eq";
  if (op == "null?") return "nullp";
  return op;
}

struct Binding {
  std::string name;  // variable in the output; empty for named functions and primitives
  FnRef fn;          // null for data
};

using Scope = std::unordered_map<std::string, Binding>;

struct Step {
  std::string bound;
  App rhs;
};

[[noreturn]] void unsupported(const std::string& what, Label at) {
  throw Error(ErrorKind::FirstifyUnsupported, what + " at " + to_string(at));
}

class Firstifier {
 public:
  Firstifier(const Program& src, const FirstifyOptions& o) : src_(src), o_(o) {}

  FirstifyResult run() {
    for (const FunDef& def : src_.defs) {
      used_.insert(def.name);
      for (const Param& p : def.params) used_.insert(p.name);
      for_each_expr(src_, def.body, [&](ExprId, const Expr& e) {
        if (e.kind == ExprKind::Let) used_.insert(e.bound);
      });
    }
    auto main = src_.index_of("main");
    if (!main) throw Error(ErrorKind::Validation, "program has no main function");
    specialization(*main, {});
    while (!queue_.empty()) {
      Pending p = std::move(queue_.front());
      queue_.pop_front();
      emit(p);
    }
    std::stable_sort(emitted_.begin(), emitted_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [_, def] : emitted_) out_.defs.push_back(std::move(def));

    FirstifyResult r;
    relabel(r.origin);
    auto diags = validate(out_);
    if (!diags.empty()) throw Error(ErrorKind::Validation, "firstified program is invalid: " + diags.front().message);
    r.program = std::move(out_);
    return r;
  }

 private:
  struct Pending {
    std::string name;
    std::size_t fn;
    std::vector<FnRef> bindings;
    std::string suffix;
  };

  std::string fresh(const std::string& base) {
    std::string name = base;
    for (int i = 2; used_.contains(name); ++i) name = base + "_" + std::to_string(i);
    used_.insert(name);
    return name;
  }

  std::string specialization(std::size_t fn, const std::vector<FnRef>& bindings) {
    const FunDef& def = src_.defs[fn];
    std::string key = def.name + "(";
    std::string suffix;
    for (const FnRef& b : bindings) {
      key += (b ? b->key() : "_") + ",";
      if (b) suffix += (suffix.empty() ? "" : "_") + b->display;
    }
    key += ")";
    if (auto it = names_.find(key); it != names_.end()) return it->second;
    if (names_.size() >= o_.max_specializations)
      throw Error(ErrorKind::FirstifyUnsupported,
                  "more than " + std::to_string(o_.max_specializations) + " specializations");
    std::string name = suffix.empty() ? def.name : fresh(def.name + "_" + suffix);
    names_[key] = name;
    queue_.push_back({name, fn, bindings, suffix});
    return name;
  }

  void emit(const Pending& p) {
    const FunDef& def = src_.defs[p.fn];
    suffix_ = p.suffix;
    Scope scope;
    FunDef nd;
    nd.name = p.name;
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      const FnRef& b = i < p.bindings.size() ? p.bindings[i] : nullptr;
      if (b && b->kind != FnDesc::Kind::Partial) {
        scope[def.params[i].name] = {"", b};
        continue;
      }
      std::string nm = rename(def.params[i].name);
      nd.params.push_back({nm, false});
      scope[def.params[i].name] = {nm, b};
    }
    nd.body = expr(def.body, scope);
    emitted_.push_back({p.fn, std::move(nd)});
  }

  std::string rename(const std::string& v) { return suffix_.empty() ? v : fresh(v + "_" + suffix_); }

  ExprId push(Expr e) {
    out_.exprs.push_back(std::move(e));
    return static_cast<ExprId>(out_.exprs.size() - 1);
  }

  VarRef data(const VarRef& v, const Scope& scope) {
    auto it = scope.find(v.name);
    if (it == scope.end()) {
      if (src_.find(v.name) || is_primitive_name(v.name))
        unsupported("function '" + v.name + "' used as a data value", v.label);
      throw Error(ErrorKind::Validation, "unbound variable '" + v.name + "'");
    }
    if (it->second.fn) unsupported("functional value '" + v.name + "' escapes", v.label);
    return VarRef{it->second.name, v.label, false, false};
  }

  ExprId expr(ExprId id, Scope& scope) {
    const Expr e = src_.expr(id);
    Expr out;
    out.label = e.label;
    out.kind = e.kind;
    switch (e.kind) {
      case ExprKind::Return:
        out.subject = data(e.subject, scope);
        return push(std::move(out));
      case ExprKind::If: {
        out.subject = data(e.subject, scope);
        ExprId a = expr(e.first, scope);
        ExprId b = expr(e.second, scope);
        out.first = a;
        out.second = b;
        return push(std::move(out));
      }
      case ExprKind::Let: break;
    }
    std::vector<Step> steps;
    let(e, scope, steps);
    ExprId cur = expr(e.first, scope);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      Expr l;
      l.kind = ExprKind::Let;
      l.label = e.label;
      l.bound = it->bound;
      l.rhs = std::move(it->rhs);
      l.first = cur;
      cur = push(std::move(l));
    }
    return cur;
  }

  struct Arg {
    std::string data;
    FnRef fn;
    Label label;
  };

  Arg argument(const VarRef& v, const Scope& scope) {
    if (auto it = scope.find(v.name); it != scope.end()) return {it->second.name, it->second.fn, v.label};
    if (src_.find(v.name)) {
      auto d = std::make_shared<FnDesc>();
      d->kind = FnDesc::Kind::Named;
      d->name = d->display = v.name;
      return {"", d, v.label};
    }
    if (is_primitive_name(v.name)) {
      auto d = std::make_shared<FnDesc>();
      d->kind = FnDesc::Kind::Prim;
      d->name = v.name;
      d->display = prim_display(v.name);
      return {"", d, v.label};
    }
    throw Error(ErrorKind::Validation, "unbound variable '" + v.name + "'");
  }

  static App call(const std::string& callee, Label label, std::vector<VarRef> args) {
    App a;
    a.kind = AppKind::Call;
    a.label = label;
    a.callee = callee;
    a.args = std::move(args);
    return a;
  }

  static App unary(AppKind kind, Label label, VarRef x) {
    App a;
    a.kind = kind;
    a.label = label;
    a.args = {std::move(x)};
    return a;
  }

  void let(const Expr& e, Scope& scope, std::vector<Step>& steps) {
    const App& a = e.rhs;
    if (a.kind != AppKind::Call) {
      App copy = a;
      copy.pinned = false;
      for (VarRef& v : copy.args) v = data(v, scope);
      std::string nm = rename(e.bound);
      steps.push_back({nm, std::move(copy)});
      scope[e.bound] = {nm, nullptr};
      return;
    }
    std::vector<Arg> args;
    for (const VarRef& v : a.args) args.push_back(argument(v, scope));

    FnRef callee;
    std::string env;
    if (auto it = scope.find(a.callee); it != scope.end()) {
      if (!it->second.fn) unsupported("'" + a.callee + "' is not a function", a.label);
      callee = it->second.fn;
      env = it->second.name;
    } else {
      auto d = std::make_shared<FnDesc>();
      d->kind = FnDesc::Kind::Named;
      d->name = d->display = a.callee;
      callee = d;
    }

    switch (callee->kind) {
      case FnDesc::Kind::Prim: {
        std::vector<VarRef> xs;
        for (const Arg& x : args) {
          if (x.fn) unsupported("primitive '" + callee->name + "' applied to a function", x.label);
          xs.push_back(VarRef{x.data, x.label, false, false});
        }
        steps.push_back({bind_data(e.bound, scope), primitive(callee->name, a.label, std::move(xs))});
        return;
      }
      case FnDesc::Kind::Named: {
        const FunDef* h = src_.find(callee->name);
        if (!h) throw Error(ErrorKind::Validation, "call to undefined function '" + callee->name + "'");
        if (args.size() > h->params.size()) unsupported("function result applied to more arguments", a.label);
        if (args.size() < h->params.size()) {
          partial(e, *callee, args, scope, steps);
          return;
        }
        full(e, *src_.index_of(callee->name), {}, args, scope, steps);
        return;
      }
      case FnDesc::Kind::Partial: {
        const FunDef* h = src_.find(callee->name);
        if (callee->supplied.size() + args.size() != h->params.size())
          unsupported("partial application of '" + callee->name + "' called with the wrong number of arguments",
                      a.label);
        // Unpack the captured arguments from the env list.
        std::string stem = rename(e.bound);
        used_.erase(stem);
        std::vector<Arg> all;
        std::string cur = env;
        std::size_t k = callee->captured(), j = 0;
        for (const FnRef& s : callee->supplied) {
          if (s) {
            all.push_back({"", s, a.label});
            continue;
          }
          std::string t = fresh(stem + "_c" + std::to_string(j));
          steps.push_back({t, unary(AppKind::Car, a.label, VarRef{cur, a.label, false, false})});
          all.push_back({t, nullptr, a.label});
          if (++j < k) {
            std::string rest = fresh(stem + "_r" + std::to_string(j));
            steps.push_back({rest, unary(AppKind::Cdr, a.label, VarRef{cur, a.label, false, false})});
            cur = rest;
          }
        }
        full(e, *src_.index_of(callee->name), std::move(all), args, scope, steps);
        return;
      }
    }
  }

  std::string bind_data(const std::string& src_name, Scope& scope) {
    std::string nm = rename(src_name);
    scope[src_name] = {nm, nullptr};
    return nm;
  }

  static App primitive(const std::string& op, Label label, std::vector<VarRef> xs) {
    App p;
    p.label = label;
    std::size_t arity = 2;
    if (op == "cons") {
      p.kind = AppKind::Cons;
    } else if (op == "car" || op == "cdr" || op == "null?") {
      p.kind = op == "car" ? AppKind::Car : op == "cdr" ? AppKind::Cdr : AppKind::NullQ;
      arity = 1;
    } else {
      p.kind = AppKind::Prim;
      p.op = op == "+" ? PrimOp::Add : op == "-" ? PrimOp::Sub : op == "*" ? PrimOp::Mul : PrimOp::Eq;
    }
    if (xs.size() != arity) unsupported("primitive '" + op + "' used with the wrong number of arguments", label);
    p.args = std::move(xs);
    return p;
  }

  void full(const Expr& e, std::size_t fn, std::vector<Arg> head, const std::vector<Arg>& tail, Scope& scope,
            std::vector<Step>& steps) {
    head.insert(head.end(), tail.begin(), tail.end());
    std::vector<FnRef> bindings;
    std::vector<VarRef> xs;
    for (const Arg& x : head) {
      bindings.push_back(x.fn);
      if (!x.fn || x.fn->kind == FnDesc::Kind::Partial) xs.push_back(VarRef{x.data, x.label, false, false});
    }
    std::string name = specialization(fn, bindings);
    steps.push_back({bind_data(e.bound, scope), call(name, e.rhs.label, std::move(xs))});
  }

  void partial(const Expr& e, const FnDesc& callee, const std::vector<Arg>& args, Scope& scope,
               std::vector<Step>& steps) {
    const Label at = e.rhs.label;
    auto d = std::make_shared<FnDesc>();
    d->kind = FnDesc::Kind::Partial;
    d->name = callee.name;
    d->display = e.bound;
    std::vector<const Arg*> captured;
    for (const Arg& x : args) {
      if (x.fn && x.fn->kind == FnDesc::Kind::Partial)
        unsupported("partial application captured by another partial application", x.label);
      d->supplied.push_back(x.fn);
      if (!x.fn) captured.push_back(&x);
    }
    std::string nm = rename(e.bound);
    App nil;
    nil.kind = AppKind::Nil;
    nil.label = at;
    if (captured.empty()) {
      steps.push_back({nm, nil});
    } else {
      std::string tail = fresh(nm + "_nil");
      steps.push_back({tail, nil});
      for (std::size_t j = captured.size(); j-- > 0;) {
        std::string cell = j == 0 ? nm : fresh(nm + "_env" + std::to_string(j));
        App c;
        c.kind = AppKind::Cons;
        c.label = at;
        c.args = {VarRef{captured[j]->data, captured[j]->label, false, false}, VarRef{tail, at, false, false}};
        steps.push_back({cell, std::move(c)});
        tail = cell;
      }
    }
    scope[e.bound] = {nm, d};
  }

  void relabel(std::map<Label, Label>& origin) {
    std::uint32_t next = 1;
    auto assign = [&](Label& l) {
      Label fresh_label{next++};
      origin[fresh_label] = l;
      l = fresh_label;
    };
    for (FunDef& def : out_.defs) {
      std::vector<ExprId> work{def.body};
      while (!work.empty()) {
        ExprId id = work.back();
        work.pop_back();
        Expr& e = out_.expr(id);
        assign(e.label);
        switch (e.kind) {
          case ExprKind::If:
            assign(e.subject.label);
            work.push_back(e.second);
            work.push_back(e.first);
            break;
          case ExprKind::Let:
            assign(e.rhs.label);
            for (VarRef& v : e.rhs.args) assign(v.label);
            work.push_back(e.first);
            break;
          case ExprKind::Return:
            assign(e.subject.label);
            break;
        }
      }
    }
  }

  const Program& src_;
  const FirstifyOptions& o_;
  Program out_;
  std::set<std::string> used_;
  std::map<std::string, std::string> names_;
  std::deque<Pending> queue_;
  std::vector<std::pair<std::size_t, FunDef>> emitted_;
  std::string suffix_;
};

}  // namespace

FirstifyResult firstify(const Program& ho, const FirstifyOptions& options) {
  // Already first-order: nothing to specialize, and pinned labels survive.
  if (validate(ho).empty()) {
    FirstifyResult r{ho, {}};
    for (const LabelSite& s : collect_labels(ho)) r.origin[s.label] = s.label;
    return r;
  }
  return Firstifier(ho, options).run();
}

KeepMap map_back(const Program& ho, const FirstifyResult& fr, const KeepMap& keep) {
  std::map<Label, bool> any;
  for (const auto& [img, src] : fr.origin) {
    auto it = keep.find(img);
    if (it == keep.end()) throw Error(ErrorKind::UnknownLabel, "keep map lacks label " + to_string(img));
    any[src] = any[src] || it->second;
  }
  KeepMap out;
  for (const LabelSite& site : collect_labels(ho)) {
    if (auto it = any.find(site.label); it != any.end()) {
      out[site.label] = it->second;
    } else if (site.kind == SiteKind::Occurrence && site.arg >= 0) {
      Label app = ho.expr(site.expr).rhs.label;
      auto a = any.find(app);
      out[site.label] = a != any.end() && a->second;
    } else {
      out[site.label] = false;
    }
  }
  return out;
}

}  // namespace fslice
