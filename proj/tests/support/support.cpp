#include "support.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fslice/demand.hpp"

namespace fslice::testing {

namespace fs = std::filesystem;

std::string corpus_dir() { return FSLICE_TEST_DIR "/corpus"; }
std::string ho_dir() { return FSLICE_TEST_DIR "/corpus_ho"; }
std::string golden_dir() { return FSLICE_TEST_DIR "/golden"; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<CorpusProgram> load_dir(const std::string& dir, bool higher_order) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".fsl") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusProgram> out;
  ParseOptions po;
  po.higher_order = higher_order;
  for (const auto& f : files) out.push_back({f.stem().string(), parse_program(read_text(f.string()), po)});
  return out;
}

}  // namespace

std::vector<CorpusProgram> load_corpus() { return load_dir(corpus_dir(), false); }
std::vector<CorpusProgram> load_ho_corpus() { return load_dir(ho_dir(), true); }

std::uint64_t seed() {
  const char* s = std::getenv("FSLICE_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 1;
}

std::string random_criterion(std::mt19937_64& rng, std::size_t max_len) {
  std::string c = "eps";
  std::size_t k = 1 + rng() % 3;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t len = 1 + rng() % max_len;
    std::string s;
    for (std::size_t b = 0; b < len; ++b) s += rng() % 2 ? '1' : '0';
    c += " + " + s;
  }
  return c;
}

std::vector<std::string> criteria_suite(std::size_t random) {
  std::vector<std::string> out = {
      "eps",          "eps + 0",      "eps + 1",        "eps + 0 + 1",       "eps + 0 + 00",
      "eps + 0 + 01", "eps + 1 + 10", "eps + 1 + 11",   "eps + 1 + 11 + 110", "eps + 1 + 10 + 100",
      "(0 + 1)*",     "0*",           "1*",             "1*0",               "(eps + 0)(eps + 1)",
      "01*",          "10*",          "eps + 0 + 1 + 10 + 11", "1 1 1 0 0",   "(01)*",
  };
  std::mt19937_64 rng(seed());
  for (std::size_t i = 0; i < random; ++i) out.push_back(random_criterion(rng));
  return out;
}

namespace {

Nfa trie(const std::vector<std::string>& strings) {
  Nfa a;
  a.start = a.add_state(true);
  std::map<std::string, StateId> node{{"", a.start}};
  for (const std::string& s : strings)
    for (std::size_t i = 1; i <= s.size(); ++i) {
      std::string p = s.substr(0, i);
      if (node.contains(p)) continue;
      StateId q = a.add_state(true);
      node[p] = q;
      a.add(node[s.substr(0, i - 1)], s[i - 1] == '0' ? Sym::Sel0 : Sym::Sel1, q);
    }
  return a;
}

// Prefix-closed sets containing eps with strings of length <= depth.
std::vector<std::vector<std::string>> trees(std::size_t depth) {
  if (depth == 0) return {{""}};
  auto sub = trees(depth - 1);
  std::vector<std::vector<std::string>> out;
  for (std::size_t l = 0; l <= sub.size(); ++l)
    for (std::size_t r = 0; r <= sub.size(); ++r) {
      std::vector<std::string> t{""};
      if (l) for (const auto& s : sub[l - 1]) t.push_back("0" + s);
      if (r) for (const auto& s : sub[r - 1]) t.push_back("1" + s);
      out.push_back(std::move(t));
    }
  return out;
}

}  // namespace

void for_each_prefix_closed(std::size_t depth, const std::function<void(const Nfa&, bool)>& fn) {
  if (depth == 0) {
    fn(trie({""}), false);
    return;
  }
  auto sub = trees(depth - 1);
  std::vector<std::string> t;
  for (std::size_t l = 0; l <= sub.size(); ++l)
    for (std::size_t r = 0; r <= sub.size(); ++r) {
      t.assign(1, "");
      if (l) for (const auto& s : sub[l - 1]) t.push_back("0" + s);
      if (r) for (const auto& s : sub[r - 1]) t.push_back("1" + s);
      fn(trie(t), l != 0);
    }
}

std::string synthesize_program(std::size_t min_exprs) {
  // Each function contributes 11 expressions; main about 12.
  std::size_t n = std::max<std::size_t>(2, (min_exprs + 10) / 11 + 1);
  std::ostringstream out;
  out << "; synthesized chain of list functions\n";
  for (std::size_t k = 1; k <= n; ++k) {
    std::string s = "_" + std::to_string(k);
    out << "(define (f" << k << " l" << s << ")\n"
        << "  (let e" << s << " <- (null? l" << s << ") in\n"
        << "  (if e" << s << "\n";
    if (k == 1)
      out << "    (let q" << s << " <- nil in\n    (return q" << s << "))\n";
    else
      out << "    (let q" << s << " <- (f" << k - 1 << " l" << s << ") in\n    (return q" << s << "))\n";
    out << "    (let h" << s << " <- (car l" << s << ") in\n"
        << "    (let t" << s << " <- (cdr l" << s << ") in\n"
        << "    (let c" << s << " <- " << k << " in\n"
        << "    (let h2" << s << " <- (+ h" << s << " c" << s << ") in\n"
        << "    (let r" << s << " <- (f" << k << " t" << s << ") in\n"
        << "    (let o" << s << " <- (cons h2" << s << " r" << s << ") in\n"
        << "    (return o" << s << "))))))))))\n\n";
  }
  out << "(define (main)\n"
      << "  (let a <- 1 in\n  (let b <- 2 in\n  (let c <- 3 in\n  (let z <- nil in\n"
      << "  (let l3 <- (cons c z) in\n  (let l2 <- (cons b l3) in\n  (let l1 <- (cons a l2) in\n"
      << "  (let x <- (f" << n << " l1) in\n  (let y <- (f" << n / 2 << " l2) in\n"
      << "  (let res <- (cons x y) in\n  (return res))))))))))))\n";
  return out.str();
}

std::vector<std::string> criterion_paths(const Nfa& crit, std::size_t max_len) {
  std::vector<std::string> out;
  for (const SymString& s : enumerate_upto(crit, max_len)) out.push_back(s);
  return out;
}

}  // namespace fslice::testing
