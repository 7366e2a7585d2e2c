#include "fslice/nfa.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "fslice/error.hpp"

namespace fslice {

char sym_char(Sym s) {
  switch (s) {
    case Sym::Sel0: return '0';
    case Sym::Sel1: return '1';
    case Sym::Bar0: return 'a';
    case Sym::Bar1: return 'b';
    case Sym::Two: return '2';
    case Sym::Eps: return 'e';
  }
  return '?';
}

Sym sym_from_char(char c) {
  switch (c) {
    case '0': return Sym::Sel0;
    case '1': return Sym::Sel1;
    case 'a': return Sym::Bar0;
    case 'b': return Sym::Bar1;
    case '2': return Sym::Two;
    case 'e': return Sym::Eps;
  }
  throw Error(ErrorKind::Syntax, std::string("bad automaton symbol '") + c + "'");
}

const char* sym_name(Sym s) {
  switch (s) {
    case Sym::Sel0: return "0";
    case Sym::Sel1: return "1";
    case Sym::Bar0: return "0b";
    case Sym::Bar1: return "1b";
    case Sym::Two: return "2";
    case Sym::Eps: return "eps";
  }
  return "?";
}

std::size_t Nfa::transition_count() const {
  std::size_t n = 0;
  for (const auto& out : adj) n += out.size();
  return n;
}

Nfa Nfa::empty_language() {
  Nfa a;
  a.start = a.add_state(false);
  return a;
}

Nfa Nfa::epsilon_language() {
  Nfa a;
  a.start = a.add_state(true);
  return a;
}

namespace {

std::vector<StateId> closure(const Nfa& a, std::vector<StateId> states) {
  std::vector<bool> seen(a.size(), false);
  for (StateId q : states) seen[q] = true;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (auto [s, r] : a.adj[states[i]]) {
      if (s == Sym::Eps && !seen[r]) {
        seen[r] = true;
        states.push_back(r);
      }
    }
  }
  std::sort(states.begin(), states.end());
  return states;
}

std::vector<StateId> step(const Nfa& a, const std::vector<StateId>& states, Sym sym) {
  std::vector<StateId> next;
  for (StateId q : states)
    for (auto [s, r] : a.adj[q])
      if (s == sym) next.push_back(r);
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return closure(a, std::move(next));
}

}  // namespace

Nfa trim(const Nfa& a) {
  std::vector<std::vector<StateId>> rev(a.size());
  for (StateId q = 0; q < a.size(); ++q)
    for (auto [s, r] : a.adj[q]) rev[r].push_back(q);
  std::vector<bool> co(a.size(), false);
  std::vector<StateId> work;
  for (StateId q = 0; q < a.size(); ++q)
    if (a.finals[q]) {
      co[q] = true;
      work.push_back(q);
    }
  while (!work.empty()) {
    StateId q = work.back();
    work.pop_back();
    for (StateId p : rev[q])
      if (!co[p]) {
        co[p] = true;
        work.push_back(p);
      }
  }
  if (a.size() == 0 || !co[a.start]) return Nfa::empty_language();

  std::vector<StateId> index(a.size(), UINT32_MAX);
  std::vector<StateId> order{a.start};
  index[a.start] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [s, r] : a.adj[order[i]])
      if (co[r] && index[r] == UINT32_MAX) {
        index[r] = static_cast<StateId>(order.size());
        order.push_back(r);
      }
  Nfa out;
  for (StateId q : order) out.add_state(a.finals[q]);
  out.start = 0;
  for (StateId q : order) {
    std::set<std::pair<Sym, StateId>> edges;
    for (auto [s, r] : a.adj[q])
      if (index[r] != UINT32_MAX && !(s == Sym::Eps && r == q)) edges.insert({s, index[r]});
    for (auto [s, r] : edges) out.add(index[q], s, r);
  }
  return out;
}

Nfa remove_epsilon(const Nfa& a) {
  Nfa out;
  for (StateId q = 0; q < a.size(); ++q) out.add_state(false);
  out.start = a.start;
  for (StateId q = 0; q < a.size(); ++q) {
    std::set<std::pair<Sym, StateId>> edges;
    for (StateId p : closure(a, {q})) {
      if (a.finals[p]) out.finals[q] = true;
      for (auto [s, r] : a.adj[p])
        if (s != Sym::Eps) edges.insert({s, r});
    }
    for (auto [s, r] : edges) out.add(q, s, r);
  }
  return trim(out);
}

Nfa determinize(const Nfa& a) {
  Nfa out;
  std::map<std::vector<StateId>, StateId> ids;
  std::deque<std::vector<StateId>> work;
  auto intern = [&](std::vector<StateId> set) {
    auto [it, fresh] = ids.emplace(set, 0);
    if (fresh) {
      bool final = std::any_of(set.begin(), set.end(), [&](StateId q) { return a.finals[q]; });
      it->second = out.add_state(final);
      work.push_back(std::move(set));
    }
    return it->second;
  };
  out.start = intern(closure(a, {a.start}));
  while (!work.empty()) {
    std::vector<StateId> set = std::move(work.front());
    work.pop_front();
    StateId from = ids.at(set);
    for (Sym s : kSymbols) {
      std::vector<StateId> next = step(a, set, s);
      if (next.empty()) continue;
      StateId to = intern(std::move(next));
      out.add(from, s, to);
    }
  }
  return out;
}

Nfa minimize(const Nfa& input) {
  Nfa d = trim(determinize(trim(input)));
  if (!d.finals[d.start] && d.adj[d.start].empty()) return Nfa::empty_language();
  const std::size_t n = d.size();
  const StateId sink = static_cast<StateId>(n);
  constexpr std::size_t k = std::size(kSymbols);
  std::vector<std::array<StateId, k>> delta(n + 1);
  for (auto& row : delta) row.fill(sink);
  for (StateId q = 0; q < n; ++q)
    for (auto [s, r] : d.adj[q]) delta[q][static_cast<std::size_t>(s)] = r;

  std::vector<std::size_t> cls(n + 1);
  for (StateId q = 0; q < n; ++q) cls[q] = d.finals[q] ? 1 : 0;
  cls[sink] = 0;
  std::size_t count = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> sig;
    std::vector<std::size_t> next(n + 1);
    for (StateId q = 0; q <= n; ++q) {
      std::vector<std::size_t> key{cls[q]};
      for (std::size_t i = 0; i < k; ++i) key.push_back(cls[delta[q][i]]);
      next[q] = sig.emplace(std::move(key), sig.size()).first->second;
    }
    if (sig.size() == count) break;
    count = sig.size();
    cls = std::move(next);
  }

  // Quotient, then renumber canonically by BFS in symbol order.
  std::map<std::size_t, StateId> index;
  std::vector<std::size_t> order{cls[d.start]};
  std::map<std::size_t, StateId> rep;
  for (StateId q = 0; q <= n; ++q) rep.emplace(cls[q], q);
  index[cls[d.start]] = 0;
  Nfa out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    StateId q = rep.at(order[i]);
    out.add_state(q != sink && d.finals[q]);
    for (std::size_t s = 0; s < k; ++s) {
      std::size_t c = cls[delta[q][s]];
      if (!index.contains(c)) {
        index[c] = static_cast<StateId>(order.size());
        order.push_back(c);
      }
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    StateId q = rep.at(order[i]);
    for (std::size_t s = 0; s < k; ++s) out.add(static_cast<StateId>(i), kSymbols[s], index.at(cls[delta[q][s]]));
  }
  out.start = 0;
  return trim(out);
}

bool equivalent(const Nfa& a, const Nfa& b) { return dump(minimize(a)) == dump(minimize(b)); }

bool is_empty(const Nfa& a) {
  Nfa t = trim(a);
  return !t.finals[t.start] && t.adj[t.start].empty();
}

bool accepts(const Nfa& a, const SymString& s) {
  std::vector<StateId> cur = closure(a, {a.start});
  for (char c : s) {
    cur = step(a, cur, sym_from_char(c));
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(), [&](StateId q) { return a.finals[q]; });
}

bool intersect_nonempty(const Nfa& a, const Nfa& b) {
  if (a.size() == 0 || b.size() == 0) return false;
  std::vector<bool> seen(a.size() * b.size(), false);
  auto key = [&](StateId p, StateId q) { return static_cast<std::size_t>(p) * b.size() + q; };
  std::vector<std::pair<StateId, StateId>> work{{a.start, b.start}};
  seen[key(a.start, b.start)] = true;
  auto visit = [&](StateId p, StateId q) {
    if (!seen[key(p, q)]) {
      seen[key(p, q)] = true;
      work.push_back({p, q});
    }
  };
  while (!work.empty()) {
    auto [p, q] = work.back();
    work.pop_back();
    if (a.finals[p] && b.finals[q]) return true;
    for (auto [s, r] : a.adj[p]) {
      if (s == Sym::Eps) {
        visit(r, q);
        continue;
      }
      for (auto [t, u] : b.adj[q])
        if (t == s) visit(r, u);
    }
    for (auto [t, u] : b.adj[q])
      if (t == Sym::Eps) visit(p, u);
  }
  return false;
}

DemandSet enumerate_upto(const Nfa& input, std::size_t maxlen) {
  Nfa a = remove_epsilon(input);
  DemandSet out;
  struct Item {
    std::vector<StateId> states;
    SymString prefix;
  };
  std::vector<Item> work{{{a.start}, ""}};
  while (!work.empty()) {
    Item it = std::move(work.back());
    work.pop_back();
    if (std::any_of(it.states.begin(), it.states.end(), [&](StateId q) { return a.finals[q]; })) out.insert(it.prefix);
    if (it.prefix.size() == maxlen) continue;
    for (Sym s : kSymbols) {
      std::vector<StateId> next = step(a, it.states, s);
      if (!next.empty()) work.push_back({std::move(next), it.prefix + sym_char(s)});
    }
  }
  return out;
}

Nfa from_strings(const DemandSet& d) {
  Nfa a;
  a.start = a.add_state(false);
  std::map<std::pair<StateId, char>, StateId> trie;
  for (const auto& s : d) {
    StateId q = a.start;
    for (char c : s) {
      auto it = trie.find({q, c});
      if (it == trie.end()) {
        StateId r = a.add_state(false);
        a.add(q, sym_from_char(c), r);
        it = trie.emplace(std::make_pair(q, c), r).first;
      }
      q = it->second;
    }
    a.finals[q] = true;
  }
  return a;
}

namespace {

StateId append(Nfa& into, const Nfa& from) {
  StateId offset = static_cast<StateId>(into.size());
  for (StateId q = 0; q < from.size(); ++q) into.add_state(from.finals[q]);
  for (StateId q = 0; q < from.size(); ++q)
    for (auto [s, r] : from.adj[q]) into.add(offset + q, s, offset + r);
  return offset;
}

}  // namespace

Nfa concat(const Nfa& a, const Nfa& b) {
  Nfa out;
  append(out, a);
  out.start = a.start;
  StateId off = append(out, b);
  for (StateId q = 0; q < a.size(); ++q)
    if (a.finals[q]) {
      out.finals[q] = false;
      out.add(q, Sym::Eps, off + b.start);
    }
  return out;
}

Nfa union_of(const Nfa& a, const Nfa& b) {
  Nfa out;
  out.start = out.add_state(false);
  StateId oa = append(out, a);
  StateId ob = append(out, b);
  out.add(out.start, Sym::Eps, oa + a.start);
  out.add(out.start, Sym::Eps, ob + b.start);
  return out;
}

Nfa prefix_close(const Nfa& a) {
  Nfa t = trim(a);
  if (is_empty(t)) return t;
  std::fill(t.finals.begin(), t.finals.end(), true);
  return t;
}

bool is_prefix_closed(const Nfa& a) {
  Nfa m = minimize(a);
  if (is_empty(m)) return true;
  return std::all_of(m.finals.begin(), m.finals.end(), [](bool f) { return f; });
}

bool over_selectors(const Nfa& a) {
  for (const auto& out : a.adj)
    for (auto [s, r] : out)
      if (s != Sym::Sel0 && s != Sym::Sel1 && s != Sym::Eps) return false;
  return true;
}

std::string dump(const Nfa& a) {
  std::ostringstream os;
  os << "start " << a.start << "\nfinals";
  for (StateId q = 0; q < a.size(); ++q)
    if (a.finals[q]) os << " " << q;
  os << "\n";
  for (StateId q = 0; q < a.size(); ++q) {
    auto edges = a.adj[q];
    std::sort(edges.begin(), edges.end());
    for (auto [s, r] : edges) os << q << " -" << sym_name(s) << "-> " << r << "\n";
  }
  return os.str();
}

}  // namespace fslice
