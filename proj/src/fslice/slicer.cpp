#include "fslice/slicer.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace fslice {

std::string fingerprint(const Program& program) {
  std::string text = print_program(program, true);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Io, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next++;
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Nfa demand_automaton(const Grammar& with_crit, Label pt, const MnOptions& mn) {
  return simplify_nfa(mohri_nederhof(with_crit, NonTerm::demand_at(pt), mn));
}

Nfa canonical_automaton(const Grammar& with_eps, Label pt, const MnOptions& mn) {
  return canonicalize_nfa(mohri_nederhof(with_eps, NonTerm::demand_at(pt), mn));
}

namespace {

std::vector<Label> all_labels(const Program& p) {
  std::vector<Label> out;
  for (const LabelSite& s : collect_labels(p)) out.push_back(s.label);
  return out;
}

}  // namespace

KeepMap keep_noninc(const Program& program, const Nfa& crit, const SliceOptions& options) {
  Grammar g = with_criterion(generate_equations(program), crit);
  std::vector<Label> labels = all_labels(program);
  std::vector<char> keep(labels.size(), 0);
  parallel_for(labels.size(), options.threads,
               [&](std::size_t i) { keep[i] = !is_empty(demand_automaton(g, labels[i], options.mn)); });
  KeepMap out;
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = keep[i] != 0;
  return out;
}

SliceResult slice_noninc(const Program& program, const Criterion& crit, const SliceOptions& options) {
  SliceResult r;
  r.keep = keep_noninc(program, crit.nfa, options);
  r.residual = extract_residual(program, r.keep);
  r.criterion = crit.text;
  return r;
}

PrecomputeArtifact precompute(const Program& program, const SliceOptions& options) {
  Grammar g = with_criterion(generate_equations(program), Nfa::epsilon_language());
  std::vector<Label> labels = all_labels(program);
  std::vector<Nfa> automata(labels.size());
  parallel_for(labels.size(), options.threads, [&](std::size_t i) {
    automata[i] = completing_automaton(canonical_automaton(g, labels[i], options.mn));
  });
  PrecomputeArtifact art;
  art.version = FSLICE_VERSION;
  art.fingerprint = fingerprint(program);
  for (std::size_t i = 0; i < labels.size(); ++i) art.automata[labels[i]] = std::move(automata[i]);
  return art;
}

bool in_slice(const PrecomputeArtifact& art, Label pt, const Nfa& crit) {
  auto it = art.automata.find(pt);
  if (it == art.automata.end()) throw Error(ErrorKind::UnknownLabel, "no automaton for label " + to_string(pt));
  return intersect_nonempty(it->second, crit);
}

KeepMap keep_inc(const PrecomputeArtifact& art, const Nfa& crit) {
  KeepMap out;
  for (const auto& [label, automaton] : art.automata) out[label] = intersect_nonempty(automaton, crit);
  return out;
}

SliceResult slice_inc(const Program& program, const PrecomputeArtifact& art, const Criterion& crit) {
  if (fingerprint(program) != art.fingerprint)
    throw Error(ErrorKind::Mismatch, "artifact was computed for a different program");
  SliceResult r;
  r.keep = keep_inc(art, crit.nfa);
  r.residual = extract_residual(program, r.keep);
  r.criterion = crit.text;
  return r;
}

Program extract_residual(const Program& program, const KeepMap& keep) {
  auto kept = [&](Label l) {
    auto it = keep.find(l);
    if (it == keep.end()) throw Error(ErrorKind::UnknownLabel, "keep map lacks label " + to_string(l));
    return it->second;
  };
  Program out = program;
  std::unordered_map<std::string, std::pair<int, int>> uses;  // name -> (occurrences, kept)
  auto note = [&](const VarRef& v) {
    if (v.hole) return;
    auto& u = uses[v.name];
    ++u.first;
    if (kept(v.label)) ++u.second;
  };
  for (FunDef& def : out.defs) {
    std::vector<ExprId> work{def.body};
    while (!work.empty()) {
      ExprId id = work.back();
      work.pop_back();
      Expr& e = out.expr(id);
      if (e.kind == ExprKind::Let)
        for (const VarRef& v : e.rhs.args) note(v);
      else
        note(e.subject);
      if (!kept(e.label)) {
        // The collapsed `(return □)` reuses a label from the dropped subtree.
        Label inner = e.kind == ExprKind::Let ? e.rhs.label : e.subject.label;
        std::vector<ExprId> rest;
        if (e.kind == ExprKind::If) rest = {e.first, e.second};
        if (e.kind == ExprKind::Let) rest = {e.first};
        // Occurrences below still count toward parameter use.
        while (!rest.empty()) {
          ExprId r = rest.back();
          rest.pop_back();
          const Expr& x = out.expr(r);
          if (x.kind == ExprKind::Let)
            for (const VarRef& v : x.rhs.args) note(v);
          else
            note(x.subject);
          if (x.kind == ExprKind::If) {
            rest.push_back(x.first);
            rest.push_back(x.second);
          } else if (x.kind == ExprKind::Let) {
            rest.push_back(x.first);
          }
        }
        Expr collapsed;
        collapsed.kind = ExprKind::Return;
        collapsed.label = e.label;
        collapsed.pinned = e.pinned;
        collapsed.subject = VarRef{"", inner, false, true};
        e = collapsed;
        continue;
      }
      switch (e.kind) {
        case ExprKind::Return:
        case ExprKind::If:
          if (!kept(e.subject.label)) e.subject = VarRef{"", e.subject.label, e.subject.pinned, true};
          if (e.kind == ExprKind::If) {
            work.push_back(e.second);
            work.push_back(e.first);
          }
          break;
        case ExprKind::Let:
          if (!kept(e.rhs.label)) {
            App hole;
            hole.kind = AppKind::Hole;
            hole.label = e.rhs.label;
            hole.pinned = e.rhs.pinned;
            e.rhs = hole;
          } else {
            for (VarRef& v : e.rhs.args)
              if (!kept(v.label)) v = VarRef{"", v.label, v.pinned, true};
          }
          work.push_back(e.first);
          break;
      }
    }
  }
  for (FunDef& def : out.defs)
    for (Param& p : def.params) {
      auto it = uses.find(p.name);
      if (!p.hole && it != uses.end() && it->second.first > 0 && it->second.second == 0) p.hole = true;
    }
  return out;
}

}  // namespace fslice
