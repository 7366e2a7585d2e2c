#include <unordered_set>

#include "fslice/regular.hpp"

namespace fslice {

namespace {

// Pairs (p,q) such that some path p -> q spells a string that cancels to ε
// under 0̄0 -> ε and 1̄1 -> ε (ε-transitions included). Worklist CFL
// reachability for the Dyck grammar  B -> ε | B B | 0̄ B 0 | 1̄ B 1.
class Balanced {
 public:
  explicit Balanced(const Nfa& m) : n_(m.size()), out_(n_), in_(n_), bar_in_(n_), sel_out_(n_) {
    for (StateId p = 0; p < n_; ++p)
      for (auto [s, q] : m.adj[p]) {
        if (s == Sym::Bar0 || s == Sym::Bar1) bar_in_[q].push_back({s, p});
        if (s == Sym::Sel0 || s == Sym::Sel1) sel_out_[p].push_back({s, q});
      }
    for (StateId p = 0; p < n_; ++p) add(p, p);
    for (StateId p = 0; p < n_; ++p)
      for (auto [s, q] : m.adj[p])
        if (s == Sym::Eps) add(p, q);
    while (!work_.empty()) {
      auto [p, q] = work_.back();
      work_.pop_back();
      for (std::size_t i = 0; i < out_[q].size(); ++i) add(p, out_[q][i]);
      for (std::size_t i = 0; i < in_[p].size(); ++i) add(in_[p][i], q);
      for (auto [bar, o] : bar_in_[p]) {
        Sym want = bar == Sym::Bar0 ? Sym::Sel0 : Sym::Sel1;
        for (auto [sel, r] : sel_out_[q])
          if (sel == want) add(o, r);
      }
    }
  }

  const std::vector<StateId>& successors(StateId p) const { return out_[p]; }

 private:
  void add(StateId p, StateId q) {
    if (!seen_.insert((static_cast<std::uint64_t>(p) << 32) | q).second) return;
    out_[p].push_back(q);
    in_[q].push_back(p);
    work_.push_back({p, q});
  }

  std::size_t n_;
  std::vector<std::vector<StateId>> out_, in_;
  std::vector<std::vector<std::pair<Sym, StateId>>> bar_in_, sel_out_;
  std::unordered_set<std::uint64_t> seen_;
  std::vector<std::pair<StateId, StateId>> work_;
};

bool is_sel(Sym s) { return s == Sym::Sel0 || s == Sym::Sel1; }
bool is_bar_sym(Sym s) { return s == Sym::Bar0 || s == Sym::Bar1; }

}  // namespace

// A string simplifies to v iff it reads u 2 t or u, where u reduces to v by
// cancellation alone and t is any string whose simplification is defined,
// i.e. t is in (B + 0 + 1 + 2)*. The leftmost 2 therefore ends the output.
Nfa simplify_nfa(const Nfa& m) {
  const std::size_t n = m.size();
  Balanced bal(m);
  Nfa out;
  for (StateId q = 0; q < n; ++q) out.add_state(m.finals[q]);
  out.start = m.start;
  StateId acc = out.add_state(true);

  std::vector<std::vector<StateId>> rev(n);
  for (StateId p = 0; p < n; ++p) {
    for (StateId q : bal.successors(p)) {
      if (q != p) out.add(p, Sym::Eps, q);
      rev[q].push_back(p);
    }
    for (auto [s, q] : m.adj[p]) {
      if (is_sel(s)) out.add(p, s, q);
      if (is_sel(s) || s == Sym::Two) rev[q].push_back(p);
    }
  }
  std::vector<bool> valid(n, false);
  std::vector<StateId> work;
  for (StateId q = 0; q < n; ++q)
    if (m.finals[q]) {
      valid[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    StateId q = work.back();
    work.pop_back();
    for (StateId p : rev[q])
      if (!valid[p]) {
        valid[p] = true;
        work.push_back(p);
      }
  }
  for (StateId p = 0; p < n; ++p)
    for (auto [s, q] : m.adj[p])
      if (s == Sym::Two && valid[q]) {
        out.add(p, Sym::Eps, acc);
        break;
      }
  return remove_epsilon(out);
}

// A string canonicalizes to P·B iff it reads x y with x in (B + 0 + 1 + 2)*
// keeping its selectors and 2s as P, and y in (B + 0̄ + 1̄)* keeping its bars
// as B. Phase X copies state p to p, phase Y to n + p.
Nfa canonicalize_nfa(const Nfa& m) {
  const std::size_t n = m.size();
  Balanced bal(m);
  Nfa out;
  for (StateId q = 0; q < 2 * n; ++q) out.add_state(q >= n && m.finals[q - n]);
  out.start = m.start;
  const StateId y = static_cast<StateId>(n);
  for (StateId p = 0; p < n; ++p) {
    out.add(p, Sym::Eps, y + p);
    for (StateId q : bal.successors(p)) {
      if (q == p) continue;
      out.add(p, Sym::Eps, q);
      out.add(y + p, Sym::Eps, y + q);
    }
    for (auto [s, q] : m.adj[p]) {
      if (is_sel(s) || s == Sym::Two) out.add(p, s, q);
      if (is_bar_sym(s)) out.add(y + p, s, y + q);
    }
  }
  return remove_epsilon(out);
}

Nfa completing_automaton(const Nfa& a) {
  const std::size_t n = a.size();
  for (StateId p = 0; p < n; ++p)
    for (auto [s, q] : a.adj[p])
      if (s == Sym::Eps) throw Error(ErrorKind::Runtime, "completing automaton needs an epsilon-free input");

  // States entered through a bar may not continue with 0, 1 or 2.
  std::vector<bool> after_bar(n, false);
  std::vector<StateId> work;
  for (StateId p = 0; p < n; ++p)
    for (auto [s, q] : a.adj[p])
      if (is_bar_sym(s) && !after_bar[q]) {
        after_bar[q] = true;
        work.push_back(q);
      }
  while (!work.empty()) {
    StateId p = work.back();
    work.pop_back();
    for (auto [s, q] : a.adj[p]) {
      if (!is_bar_sym(s))
        throw Error(ErrorKind::Runtime, "automaton is not canonical: " + std::string(sym_name(s)) + " after a bar");
      if (!after_bar[q]) {
        after_bar[q] = true;
        work.push_back(q);
      }
    }
  }

  std::vector<bool> frontier(n, false);
  frontier[a.start] = true;
  work = {a.start};
  while (!work.empty()) {
    StateId p = work.back();
    work.pop_back();
    for (auto [s, q] : a.adj[p])
      if (!is_bar_sym(s) && !frontier[q]) {
        frontier[q] = true;
        work.push_back(q);
      }
  }

  Nfa out;
  for (StateId q = 0; q < n; ++q) out.add_state(frontier[q]);
  for (StateId p = 0; p < n; ++p)
    for (auto [s, q] : a.adj[p]) {
      if (s == Sym::Bar0) out.add(q, Sym::Sel0, p);
      if (s == Sym::Bar1) out.add(q, Sym::Sel1, p);
    }
  out.start = out.add_state(false);
  for (StateId q = 0; q < n; ++q)
    if (a.finals[q]) out.add(out.start, Sym::Eps, q);
  return trim(out);
}

}  // namespace fslice
