#include "fslice/grammar.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fslice {

void Grammar::add(NonTerm head, Body body) {
  auto& bodies = rules[head];
  if (std::find(bodies.begin(), bodies.end(), body) == bodies.end()) bodies.push_back(std::move(body));
}

const std::vector<Body>& Grammar::productions(NonTerm n) const {
  static const std::vector<Body> none;
  auto it = rules.find(n);
  return it == rules.end() ? none : it->second;
}

std::string Grammar::name(NonTerm n) const {
  auto fname = [&](std::uint32_t i) { return i < functions.size() ? functions[i] : "f" + std::to_string(i); };
  switch (n.kind) {
    case NonTerm::Kind::DemandAt: return "D[" + to_string(Label{n.a}) + "]";
    case NonTerm::Kind::DemandAtPrimed: return "D'[" + to_string(Label{n.a}) + "]";
    case NonTerm::Kind::Relative: return "R[" + to_string(Label{n.a}) + "]";
    case NonTerm::Kind::Summary: return "L[" + fname(n.a) + "," + std::to_string(n.b) + "]";
    case NonTerm::Kind::FnDemand: return "S[" + fname(n.a) + "]";
    case NonTerm::Kind::Criterion: return "CRIT";
    case NonTerm::Kind::CritState: return "C[q" + std::to_string(n.a) + "]";
  }
  return "?";
}

namespace {

std::string terminal_name(char c) {
  switch (c) {
    case 'a': return "0b";
    case 'b': return "1b";
    default: return std::string(1, c);
  }
}

bool mentions(const Body& b, NonTerm n) {
  return std::any_of(b.begin(), b.end(), [&](const GSym& s) { return !s.terminal && s.nt == n; });
}

}  // namespace

std::string Grammar::dump() const {
  std::ostringstream os;
  for (const auto& [head, bodies] : rules) {
    std::vector<std::string> lines;
    for (const Body& body : bodies) {
      std::string line = name(head) + " ->";
      if (body.empty()) line += " eps";
      for (const GSym& s : body) line += " " + (s.terminal ? terminal_name(s.t) : name(s.nt));
      lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << l << "\n";
  }
  return os.str();
}

namespace {

class Generator {
 public:
  explicit Generator(const Program& p) : p_(p) {}

  Grammar run() {
    for (const FunDef& def : p_.defs) g_.functions.push_back(def.name);
    for (std::size_t f = 0; f < p_.defs.size(); ++f) function(f);
    if (auto m = p_.index_of("main")) {
      main_demand_ = NonTerm::fn_demand(*m);
      g_.add(main_demand_, {GSym::var(NonTerm::criterion())});
    }
    for (const LabelSite& site : collect_labels(p_)) {
      NonTerm d = NonTerm::demand_at(site.label);
      g_.rules[d];
      g_.add(d, {GSym::var(NonTerm::relative(site.label)), GSym::var(NonTerm::fn_demand(site.function))});
    }
    inline_chains();
    prune_unproductive();
    drop_unused_relatives();
    return std::move(g_);
  }

 private:
  static GSym R(Label l) { return GSym::var(NonTerm::relative(l)); }

  void function(std::size_t f) {
    const FunDef& def = p_.defs[f];
    std::unordered_map<std::string, std::vector<Label>> occurrences;
    for_each_expr(p_, def.body, [&](ExprId, const Expr& e) {
      if (e.kind != ExprKind::Let) {
        if (!e.subject.hole) occurrences[e.subject.name].push_back(e.subject.label);
      } else {
        for (const VarRef& v : e.rhs.args)
          if (!v.hole) occurrences[v.name].push_back(v.label);
      }
    });
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      NonTerm l = NonTerm::summary(f, i + 1);
      g_.rules[l];
      if (def.params[i].hole) continue;
      for (Label occ : occurrences[def.params[i].name]) g_.add(l, {R(occ)});
    }
    g_.rules[NonTerm::fn_demand(f)];

    g_.add(NonTerm::relative(p_.expr(def.body).label), {});
    for_each_expr(p_, def.body, [&](ExprId, const Expr& e) {
      NonTerm self = NonTerm::relative(e.label);
      switch (e.kind) {
        case ExprKind::Return:
          g_.add(NonTerm::relative(e.subject.label), {GSym::var(self)});
          break;
        case ExprKind::If:
          g_.add(NonTerm::relative(e.subject.label), {GSym::term('2'), GSym::var(self)});
          g_.add(NonTerm::relative(p_.expr(e.first).label), {GSym::var(self)});
          g_.add(NonTerm::relative(p_.expr(e.second).label), {GSym::var(self)});
          break;
        case ExprKind::Let: {
          g_.add(NonTerm::relative(p_.expr(e.first).label), {GSym::var(self)});
          NonTerm app = NonTerm::relative(e.rhs.label);
          g_.rules[app];
          for (Label occ : occurrences[e.bound]) g_.add(app, {R(occ)});
          application(f, e.rhs);
          break;
        }
      }
    });
  }

  void application(std::size_t f, const App& a) {
    GSym ctx = R(a.label);
    auto arg = [&](std::size_t i) { return NonTerm::relative(a.args[i].label); };
    switch (a.kind) {
      case AppKind::Const:
      case AppKind::Nil:
      case AppKind::Hole:
        break;
      case AppKind::Cons:
        g_.add(arg(0), {GSym::term('a'), ctx});
        g_.add(arg(1), {GSym::term('b'), ctx});
        break;
      case AppKind::Car:
        g_.add(arg(0), {GSym::term('2'), ctx});
        g_.add(arg(0), {GSym::term('0'), ctx});
        break;
      case AppKind::Cdr:
        g_.add(arg(0), {GSym::term('2'), ctx});
        g_.add(arg(0), {GSym::term('1'), ctx});
        break;
      case AppKind::NullQ:
      case AppKind::Prim:
        for (std::size_t i = 0; i < a.args.size(); ++i) g_.add(arg(i), {GSym::term('2'), ctx});
        break;
      case AppKind::Call: {
        auto callee = p_.index_of(a.callee);
        if (!callee) throw Error(ErrorKind::Validation, "call to undefined function '" + a.callee + "'");
        for (std::size_t i = 0; i < a.args.size(); ++i)
          g_.add(arg(i), {GSym::var(NonTerm::summary(*callee, i + 1)), ctx});
        g_.add(NonTerm::fn_demand(*callee), {ctx, GSym::var(NonTerm::fn_demand(f))});
        break;
      }
    }
  }

  // Substitutes nonterminals that have a single short, non-recursive
  // production into their uses. The definitions stay so every D[π] remains a
  // valid start symbol. Summaries and function demands other than main's keep
  // their names.
  void inline_chains() {
    constexpr std::size_t kMaxBody = 16;
    constexpr std::size_t kMaxResult = 64;
    std::map<NonTerm, std::set<NonTerm>> users;
    for (const auto& [head, bodies] : g_.rules)
      for (const Body& b : bodies)
        for (const GSym& s : b)
          if (!s.terminal) users[s.nt].insert(head);

    std::set<NonTerm> done;
    std::vector<NonTerm> work;
    for (const auto& [head, _] : g_.rules) work.push_back(head);
    std::reverse(work.begin(), work.end());
    while (!work.empty()) {
      NonTerm x = work.back();
      work.pop_back();
      if (done.contains(x) || x.kind == NonTerm::Kind::Criterion || x.kind == NonTerm::Kind::Summary ||
          (x.kind == NonTerm::Kind::FnDemand && x != main_demand_))
        continue;
      const auto& xb = g_.productions(x);
      if (xb.size() != 1 || xb[0].size() > kMaxBody || mentions(xb[0], x)) continue;
      done.insert(x);
      const Body replacement = xb[0];
      std::set<NonTerm> ys = users[x];
      for (NonTerm y : ys) {
        if (y == x) continue;
        auto& bodies = g_.rules[y];
        std::vector<Body> next;
        bool kept_x = false;
        for (const Body& b : bodies) {
          if (!mentions(b, x)) {
            if (std::find(next.begin(), next.end(), b) == next.end()) next.push_back(b);
            continue;
          }
          Body nb;
          for (const GSym& s : b) {
            if (!s.terminal && s.nt == x)
              nb.insert(nb.end(), replacement.begin(), replacement.end());
            else
              nb.push_back(s);
          }
          if (nb.size() > kMaxResult) {
            if (std::find(next.begin(), next.end(), b) == next.end()) next.push_back(b);
            kept_x = true;
            continue;
          }
          for (const GSym& s : nb)
            if (!s.terminal) users[s.nt].insert(y);
          if (nb.size() == 1 && !nb[0].terminal && nb[0].nt == y) continue;
          if (std::find(next.begin(), next.end(), nb) == next.end()) next.push_back(std::move(nb));
        }
        bodies = std::move(next);
        if (!kept_x) users[x].erase(y);
        work.push_back(y);
      }
    }
  }

  void prune_unproductive() {
    std::set<NonTerm> productive{NonTerm::criterion()};
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [head, bodies] : g_.rules) {
        if (productive.contains(head)) continue;
        for (const Body& b : bodies) {
          if (std::all_of(b.begin(), b.end(), [&](const GSym& s) { return s.terminal || productive.contains(s.nt); })) {
            productive.insert(head);
            changed = true;
            break;
          }
        }
      }
    }
    for (auto& [head, bodies] : g_.rules) {
      std::erase_if(bodies, [&](const Body& b) {
        return std::any_of(b.begin(), b.end(), [&](const GSym& s) { return !s.terminal && !productive.contains(s.nt); });
      });
    }
  }

  void drop_unused_relatives() {
    std::set<NonTerm> used;
    for (const auto& [head, bodies] : g_.rules)
      for (const Body& b : bodies)
        for (const GSym& s : b)
          if (!s.terminal) used.insert(s.nt);
    std::erase_if(g_.rules, [&](const auto& kv) {
      return kv.first.kind == NonTerm::Kind::Relative && !used.contains(kv.first);
    });
  }

  const Program& p_;
  Grammar g_;
  NonTerm main_demand_;
};

}  // namespace

Grammar generate_equations(const Program& program) { return Generator(program).run(); }

Grammar with_criterion(const Grammar& g, const Nfa& criterion) {
  if (!over_selectors(criterion)) throw Error(ErrorKind::Criterion, "criterion must be over {0,1}");
  Nfa c = trim(criterion);
  if (is_empty(c)) throw Error(ErrorKind::Criterion, "empty slicing criterion");
  if (!is_prefix_closed(c)) throw Error(ErrorKind::Criterion, "slicing criterion is not prefix-closed");
  Grammar out = g;
  out.rules.erase(NonTerm::criterion());
  out.add(NonTerm::criterion(), {GSym::var(NonTerm::crit_state(c.start))});
  for (StateId q = 0; q < c.size(); ++q) {
    out.rules[NonTerm::crit_state(q)];
    if (c.finals[q]) out.add(NonTerm::crit_state(q), {});
    for (auto [s, r] : c.adj[q]) {
      Body b;
      if (s != Sym::Eps) b.push_back(GSym::term(sym_char(s)));
      b.push_back(GSym::var(NonTerm::crit_state(r)));
      out.add(NonTerm::crit_state(q), std::move(b));
    }
  }
  return out;
}

Grammar instantiate(const Grammar& g, Label pt, const Nfa& criterion) {
  if (!g.rules.contains(NonTerm::demand_at(pt))) throw Error(ErrorKind::UnknownLabel, "no label " + to_string(pt));
  Grammar out = with_criterion(g, criterion);
  out.add(NonTerm::demand_primed(pt), {GSym::var(NonTerm::demand_at(pt)), GSym::term('$')});
  return out;
}

namespace {

// Strings of length <= maxlen for one production, given the current languages.
DemandSet bounded_body(const Body& b, std::map<NonTerm, DemandSet>& lang, std::size_t maxlen) {
  DemandSet acc{""};
  for (const GSym& s : b) {
    DemandSet next;
    if (s.terminal) {
      for (const auto& x : acc)
        if (x.size() < maxlen) next.insert(x + s.t);
    } else {
      const DemandSet& part = lang[s.nt];
      for (const auto& x : acc)
        for (const auto& y : part)
          if (x.size() + y.size() <= maxlen) next.insert(x + y);
    }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

// Solves strongly connected groups of nonterminals bottom-up so each group
// iterates only over its own members.
std::map<NonTerm, DemandSet> bounded_fixpoint(const Grammar& g, const std::set<NonTerm>& heads, std::size_t maxlen) {
  std::map<NonTerm, int> index, low;
  std::vector<NonTerm> stack;
  std::set<NonTerm> on_stack;
  std::vector<std::vector<NonTerm>> sccs;  // dependencies come first
  int next = 0;
  std::function<void(NonTerm)> visit = [&](NonTerm v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const Body& b : g.productions(v))
      for (const GSym& s : b) {
        if (s.terminal || !heads.contains(s.nt)) continue;
        if (!index.contains(s.nt)) {
          visit(s.nt);
          low[v] = std::min(low[v], low[s.nt]);
        } else if (on_stack.contains(s.nt)) {
          low[v] = std::min(low[v], index[s.nt]);
        }
      }
    if (low[v] == index[v]) {
      std::vector<NonTerm> scc;
      NonTerm w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      sccs.push_back(std::move(scc));
    }
  };
  for (NonTerm n : heads)
    if (!index.contains(n)) visit(n);

  std::map<NonTerm, DemandSet> lang;
  for (const auto& scc : sccs) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (NonTerm n : scc)
        for (const Body& b : g.productions(n))
          for (auto& x : bounded_body(b, lang, maxlen))
            if (lang[n].insert(x).second) changed = true;
      if (scc.size() == 1) {
        // A single nonterminal without a self reference is done after one pass.
        bool self = false;
        for (const Body& b : g.productions(scc[0]))
          for (const GSym& s : b) self = self || (!s.terminal && s.nt == scc[0]);
        if (!self) break;
      }
    }
  }
  return lang;
}

}  // namespace

DemandSet eval_finite(const Grammar& g, NonTerm start, std::size_t maxlen) {
  std::set<NonTerm> reach{start};
  std::vector<NonTerm> work{start};
  while (!work.empty()) {
    NonTerm n = work.back();
    work.pop_back();
    for (const Body& b : g.productions(n))
      for (const GSym& s : b)
        if (!s.terminal && reach.insert(s.nt).second) work.push_back(s.nt);
  }
  return bounded_fixpoint(g, reach, maxlen)[start];
}

std::map<NonTerm, DemandSet> eval_finite_all(const Grammar& g, std::size_t maxlen) {
  std::set<NonTerm> heads;
  for (const auto& [n, _] : g.rules) heads.insert(n);
  return bounded_fixpoint(g, heads, maxlen);
}

}  // namespace fslice
