#include "fslice/interpreter.hpp"

#include <ostream>
#include <sstream>
#include <unordered_map>

namespace fslice {

namespace {

using Env = std::unordered_map<std::string, Value>;

struct Frame {
  Env env;
  std::string bound;
  ExprId cont;
};

[[noreturn]] void runtime(const std::string& what, Label at) {
  throw Error(ErrorKind::Runtime, what + " at " + to_string(at));
}

class Machine {
 public:
  Machine(const Program& p, const RunOptions& o) : p_(p), o_(o) {}

  RunResult run() {
    const FunDef& m = p_.main();
    ExprId e = m.body;
    Env env;
    RunResult result;
    while (true) {
      if (result.steps++ >= o_.fuel)
        throw Error(ErrorKind::Timeout, "evaluation exceeded " + std::to_string(o_.fuel) + " steps");
      const Expr& x = p_.expr(e);
      switch (x.kind) {
        case ExprKind::Return: {
          Value v = lookup(env, x.subject);
          trace("return", x.label);
          if (stack_.empty()) {
            result.value = v;
            result.heap = std::move(heap_);
            return result;
          }
          Frame f = std::move(stack_.back());
          stack_.pop_back();
          env = std::move(f.env);
          env[f.bound] = v;
          e = f.cont;
          break;
        }
        case ExprKind::If: {
          Value g = lookup(env, x.subject);
          if (g.kind == Value::Kind::Hole)
            throw Error(ErrorKind::HoleObserved, "hole reached the guard at " + to_string(x.label));
          bool truth = !(g.kind == Value::Kind::Nil || (g.kind == Value::Kind::Int && g.n == 0));
          trace(truth ? "if-true" : "if-false", x.label);
          e = truth ? x.first : x.second;
          break;
        }
        case ExprKind::Let: {
          const App& a = x.rhs;
          if (a.kind == AppKind::Call) {
            const FunDef* callee = p_.find(a.callee);
            if (!callee) runtime("call to undefined function '" + a.callee + "'", a.label);
            if (callee->params.size() != a.args.size()) runtime("arity mismatch calling '" + a.callee + "'", a.label);
            Env inner;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
              Value v = lookup(env, a.args[i]);
              if (!callee->params[i].hole) inner[callee->params[i].name] = v;
            }
            trace("let-fncall", x.label);
            stack_.push_back({std::move(env), x.bound, x.first});
            env = std::move(inner);
            e = callee->body;
          } else {
            env[x.bound] = apply(env, a, x.label);
            e = x.first;
          }
          break;
        }
      }
    }
  }

 private:
  void trace(const char* rule, Label l) {
    if (o_.trace) *o_.trace << rule << " " << to_string(l) << "\n";
  }

  Value lookup(const Env& env, const VarRef& v) {
    if (v.hole) return Value::hole();
    auto it = env.find(v.name);
    if (it == env.end()) runtime("unbound variable '" + v.name + "'", v.label);
    return it->second;
  }

  Value apply(const Env& env, const App& a, Label at) {
    switch (a.kind) {
      case AppKind::Const:
        trace("const", at);
        return Value::integer(a.value);
      case AppKind::Nil:
        trace("const", at);
        return Value::nil();
      case AppKind::Hole:
        trace("let-nonfn", at);
        return Value::hole();
      case AppKind::Cons:
        trace("cons", at);
        return heap_.alloc(lookup(env, a.args[0]), lookup(env, a.args[1]));
      case AppKind::Car:
      case AppKind::Cdr: {
        Value v = lookup(env, a.args[0]);
        trace(a.kind == AppKind::Car ? "car" : "cdr", at);
        if (v.kind == Value::Kind::Hole) return v;
        if (v.kind != Value::Kind::Loc) runtime(a.kind == AppKind::Car ? "car of a non-pair" : "cdr of a non-pair", a.label);
        const Cell& c = heap_.at(v.loc);
        return a.kind == AppKind::Car ? c.car : c.cdr;
      }
      case AppKind::NullQ: {
        Value v = lookup(env, a.args[0]);
        if (v.kind == Value::Kind::Hole) {
          trace("null-false", at);
          return v;
        }
        bool is_nil = v.kind == Value::Kind::Nil;
        trace(is_nil ? "null-true" : "null-false", at);
        return Value::integer(is_nil ? 1 : 0);
      }
      case AppKind::Prim: {
        Value l = lookup(env, a.args[0]);
        Value r = lookup(env, a.args[1]);
        trace("prim", at);
        if (l.kind == Value::Kind::Hole || r.kind == Value::Kind::Hole) return Value::hole();
        if (a.op == PrimOp::Eq) return Value::integer(l == r ? 1 : 0);
        if (l.kind != Value::Kind::Int || r.kind != Value::Kind::Int)
          runtime(std::string("'") + to_string(a.op) + "' expects integers", a.label);
        switch (a.op) {
          case PrimOp::Add: return Value::integer(static_cast<std::int64_t>(static_cast<std::uint64_t>(l.n) + static_cast<std::uint64_t>(r.n)));
          case PrimOp::Sub: return Value::integer(static_cast<std::int64_t>(static_cast<std::uint64_t>(l.n) - static_cast<std::uint64_t>(r.n)));
          case PrimOp::Mul: return Value::integer(static_cast<std::int64_t>(static_cast<std::uint64_t>(l.n) * static_cast<std::uint64_t>(r.n)));
          case PrimOp::Eq: break;
        }
        return Value::hole();
      }
      case AppKind::Call: break;
    }
    runtime("unexpected application", a.label);
  }

  const Program& p_;
  const RunOptions& o_;
  Heap heap_;
  std::vector<Frame> stack_;
};

void render(std::ostream& os, const Value& v, const Heap& heap) {
  switch (v.kind) {
    case Value::Kind::Int: os << v.n; return;
    case Value::Kind::Nil: os << "nil"; return;
    case Value::Kind::Hole: os << "\xE2\x96\xA1"; return;
    case Value::Kind::Loc: break;
  }
  os << "(";
  Value cur = v;
  bool first = true;
  while (cur.kind == Value::Kind::Loc) {
    const Cell& c = heap.at(cur.loc);
    if (!first) os << " ";
    first = false;
    render(os, c.car, heap);
    cur = c.cdr;
  }
  if (cur.kind != Value::Kind::Nil) {
    os << " . ";
    render(os, cur, heap);
  }
  os << ")";
}

}  // namespace

RunResult run_program(const Program& program, const RunOptions& options) { return Machine(program, options).run(); }

std::string render_value(const Value& v, const Heap& heap) {
  std::ostringstream os;
  render(os, v, heap);
  return os.str();
}

std::string to_string(const Observation& o) {
  switch (o.kind) {
    case Observation::Kind::Int: return std::to_string(o.n);
    case Observation::Kind::Nil: return "nil";
    case Observation::Kind::Pair: return "pair";
    case Observation::Kind::Absent: return "absent";
  }
  return "?";
}

std::map<std::string, Observation> project(const Value& v, const Heap& heap, const std::vector<std::string>& paths) {
  std::map<std::string, Observation> out;
  for (const std::string& path : paths) {
    Value cur = v;
    Observation obs;
    bool absent = false;
    for (char c : path) {
      if (cur.kind == Value::Kind::Hole)
        throw Error(ErrorKind::HoleObserved, "hole observed along path '" + path + "'");
      if (cur.kind != Value::Kind::Loc) {
        absent = true;
        break;
      }
      const Cell& cell = heap.at(cur.loc);
      cur = c == '0' ? cell.car : cell.cdr;
    }
    if (!absent) {
      switch (cur.kind) {
        case Value::Kind::Hole: throw Error(ErrorKind::HoleObserved, "hole observed at path '" + path + "'");
        case Value::Kind::Int: obs = {Observation::Kind::Int, cur.n}; break;
        case Value::Kind::Nil: obs = {Observation::Kind::Nil, 0}; break;
        case Value::Kind::Loc: obs = {Observation::Kind::Pair, 0}; break;
      }
    }
    out[path] = obs;
  }
  return out;
}

}  // namespace fslice
