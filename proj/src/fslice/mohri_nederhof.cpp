#include <algorithm>
#include <map>
#include <set>

#include "fslice/regular.hpp"

namespace fslice {

namespace {

enum class SccShape { RightLinear, LeftLinear, General };

class MnBuilder {
 public:
  MnBuilder(const Grammar& g, const MnOptions& o) : g_(g), o_(o) {}

  Nfa run(NonTerm start) {
    collect(start);
    tarjan();
    StateId entry = fresh();
    StateId exit = fresh();
    nfa_.start = entry;
    nfa_.finals[exit] = true;
    build(start, entry, exit);
    return trim(nfa_);
  }

 private:
  StateId fresh() {
    if (nfa_.size() >= o_.max_states) throw Error(ErrorKind::Runtime, "regular approximation exceeded the state limit");
    return nfa_.add_state(false);
  }

  void collect(NonTerm start) {
    std::vector<NonTerm> work{start};
    nodes_.insert(start);
    while (!work.empty()) {
      NonTerm n = work.back();
      work.pop_back();
      for (const Body& b : g_.productions(n))
        for (const GSym& s : b)
          if (!s.terminal && nodes_.insert(s.nt).second) work.push_back(s.nt);
    }
  }

  // Iterative Tarjan over the nonterminal graph.
  void tarjan() {
    std::map<NonTerm, int> index, low;
    std::vector<NonTerm> stack;
    std::set<NonTerm> on_stack;
    int counter = 0;
    struct Frame {
      NonTerm n;
      std::vector<NonTerm> succ;
      std::size_t next = 0;
    };
    auto successors = [&](NonTerm n) {
      std::vector<NonTerm> out;
      for (const Body& b : g_.productions(n))
        for (const GSym& s : b)
          if (!s.terminal) out.push_back(s.nt);
      return out;
    };
    for (NonTerm root : nodes_) {
      if (index.contains(root)) continue;
      std::vector<Frame> frames;
      auto enter = [&](NonTerm n) {
        index[n] = low[n] = counter++;
        stack.push_back(n);
        on_stack.insert(n);
        frames.push_back({n, successors(n), 0});
      };
      enter(root);
      while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.next < f.succ.size()) {
          NonTerm w = f.succ[f.next++];
          if (!index.contains(w)) {
            enter(w);
          } else if (on_stack.contains(w)) {
            low[f.n] = std::min(low[f.n], index[w]);
          }
          continue;
        }
        NonTerm n = f.n;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().n] = std::min(low[frames.back().n], low[n]);
        if (low[n] == index[n]) {
          std::size_t id = sccs_.size();
          sccs_.emplace_back();
          while (true) {
            NonTerm m = stack.back();
            stack.pop_back();
            on_stack.erase(m);
            scc_of_[m] = id;
            sccs_[id].push_back(m);
            if (m == n) break;
          }
          shapes_.push_back(classify(id));
        }
      }
    }
  }

  bool member(NonTerm n, std::size_t scc) const { return scc_of_.at(n) == scc; }

  SccShape classify(std::size_t scc) const {
    bool right = true, left = true;
    for (NonTerm a : sccs_[scc])
      for (const Body& b : g_.productions(a)) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
          if (b[i].terminal || !member(b[i].nt, scc)) continue;
          ++count;
          if (i + 1 != b.size()) right = false;
          if (i != 0) left = false;
        }
        if (count > 1) right = left = false;
      }
    if (right) return SccShape::RightLinear;
    if (left) return SccShape::LeftLinear;
    return SccShape::General;
  }

  // Adds a path from `from` to `to` spelling the symbols [first, last), where
  // nonterminals outside `scc` are expanded recursively.
  void sequence(const GSym* first, const GSym* last, StateId from, StateId to) {
    if (first == last) {
      nfa_.add(from, Sym::Eps, to);
      return;
    }
    StateId cur = from;
    for (const GSym* s = first; s != last; ++s) {
      StateId next = s + 1 == last ? to : fresh();
      if (s->terminal) {
        if (s->t == '$') throw Error(ErrorKind::Runtime, "end marker inside an automaton");
        nfa_.add(cur, sym_from_char(s->t), next);
      } else {
        build(s->nt, cur, next);
      }
      cur = next;
    }
  }

  void build(NonTerm x, StateId entry, StateId exit) {
    std::size_t scc = scc_of_.at(x);
    switch (shapes_[scc]) {
      case SccShape::RightLinear: {
        auto key = std::make_pair(scc, exit);
        auto it = right_memo_.find(key);
        if (it == right_memo_.end()) {
          std::map<NonTerm, StateId> st;
          for (NonTerm a : sccs_[scc]) st[a] = fresh();
          it = right_memo_.emplace(key, st).first;
          for (NonTerm a : sccs_[scc])
            for (const Body& b : g_.productions(a)) {
              const GSym* f = b.data();
              const GSym* l = b.data() + b.size();
              if (!b.empty() && !b.back().terminal && member(b.back().nt, scc))
                sequence(f, l - 1, st[a], st[b.back().nt]);
              else
                sequence(f, l, st[a], exit);
            }
        }
        nfa_.add(entry, Sym::Eps, it->second.at(x));
        return;
      }
      case SccShape::LeftLinear: {
        std::map<NonTerm, StateId> st;
        for (NonTerm a : sccs_[scc]) st[a] = fresh();
        for (NonTerm a : sccs_[scc])
          for (const Body& b : g_.productions(a)) {
            const GSym* f = b.data();
            const GSym* l = b.data() + b.size();
            if (!b.empty() && !b.front().terminal && member(b.front().nt, scc))
              sequence(f + 1, l, st[b.front().nt], st[a]);
            else
              sequence(f, l, entry, st[a]);
          }
        nfa_.add(st[x], Sym::Eps, exit);
        return;
      }
      case SccShape::General: {
        std::map<NonTerm, std::pair<StateId, StateId>> st;
        for (NonTerm a : sccs_[scc]) st[a] = {fresh(), fresh()};
        for (NonTerm a : sccs_[scc])
          for (const Body& b : g_.productions(a)) {
            StateId cur = st[a].first;
            const GSym* seg = b.data();
            for (std::size_t i = 0; i < b.size(); ++i) {
              if (b[i].terminal || !member(b[i].nt, scc)) continue;
              sequence(seg, b.data() + i, cur, st[b[i].nt].first);
              cur = st[b[i].nt].second;
              seg = b.data() + i + 1;
            }
            sequence(seg, b.data() + b.size(), cur, st[a].second);
          }
        nfa_.add(entry, Sym::Eps, st[x].first);
        nfa_.add(st[x].second, Sym::Eps, exit);
        return;
      }
    }
  }

  const Grammar& g_;
  const MnOptions& o_;
  Nfa nfa_;
  std::set<NonTerm> nodes_;
  std::map<NonTerm, std::size_t> scc_of_;
  std::vector<std::vector<NonTerm>> sccs_;
  std::vector<SccShape> shapes_;
  std::map<std::pair<std::size_t, StateId>, std::map<NonTerm, StateId>> right_memo_;
};

}  // namespace

Nfa mohri_nederhof(const Grammar& g, NonTerm start, const MnOptions& options) {
  return MnBuilder(g, options).run(start);
}

}  // namespace fslice
