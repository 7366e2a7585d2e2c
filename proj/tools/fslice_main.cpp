// fslice command line. Exit codes: 0 ok, 1 usage, 2 analysis error, 3 artifact mismatch.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fslice/fslice.h"

namespace {

// Owns a string handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { fslice_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Program {
  fslice_program* p = nullptr;
  ~Program() { fslice_program_free(p); }
};

struct Artifact {
  fslice_artifact* a = nullptr;
  ~Artifact() { fslice_artifact_free(a); }
};

struct Failure {
  int code;
};

void check(fslice_status s) {
  if (s == FSLICE_OK) return;
  std::cerr << "fslice: " << fslice_last_error_kind() << ": " << fslice_last_error() << "\n";
  throw Failure{static_cast<int>(s)};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "fslice: io: cannot write '" << path << "'\n";
    throw Failure{2};
  }
}

void load(Program& prog, const std::string& path, bool higher_order, bool holes = false) {
  int flags = (higher_order ? FSLICE_PARSE_HIGHER_ORDER : 0) | (holes ? FSLICE_PARSE_ALLOW_HOLES : 0);
  check(fslice_program_load(path.c_str(), flags, &prog.p));
}

// Random prefix-closed criteria: unions of up to four selector strings of length <= 4.
std::vector<std::string> random_criteria(std::size_t n) {
  const char* env = std::getenv("FSLICE_SEED");
  std::mt19937_64 rng(env ? std::strtoull(env, nullptr, 10) : 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string c = "eps";
    std::size_t k = 1 + rng() % 4;
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t len = 1 + rng() % 4;
      std::string s;
      for (std::size_t b = 0; b < len; ++b) s += rng() % 2 ? '1' : '0';
      c += " + " + s;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& xs) {
  std::vector<const char*> out;
  for (const auto& x : xs) out.push_back(x.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Demand-driven static slicer for first-order ANF programs"};
  app.set_version_flag("--version", std::string(fslice_version()));
  app.require_subcommand(1);

  // slice
  std::string program, criterion, mode = "noninc", out_path, report_path, artifact_path, dump_automaton;
  bool strict = false, firstify = false, dump_grammar = false;
  unsigned threads = 0;
  auto* slice = app.add_subcommand("slice", "Slice a program for a criterion on main's result");
  slice->add_option("program", program, "Program (.fsl)")->required();
  slice->add_option("-c,--criterion", criterion, "Regular expression over {0,1}, e.g. \"eps + 0\"")->required();
  slice->add_option("-m,--mode", mode, "noninc or inc")->check(CLI::IsMember({"noninc", "inc"}));
  slice->add_option("-a,--artifact", artifact_path, "Precomputed artifact for --mode inc");
  slice->add_flag("--strict", strict, "Reject criteria that are not prefix-closed");
  slice->add_option("-o,--out", out_path, "Residual program (default stdout)");
  slice->add_option("-r,--report", report_path, "JSON keep report ('-' for stdout)");
  slice->add_flag("--dump-grammar", dump_grammar, "Print the demand grammar to stderr");
  slice->add_option("--dump-automaton", dump_automaton, "Print the demand automaton at a label to stderr");
  slice->add_flag("--firstify", firstify, "Accept higher-order programs");
  slice->add_option("-j,--threads", threads, "Worker threads (0: all cores)");

  // precompute
  auto* pre = app.add_subcommand("precompute", "Precompute completing automata for every label");
  pre->add_option("program", program, "Program (.fsl)")->required();
  pre->add_option("-o,--out", out_path, "Artifact (default stdout)");
  pre->add_flag("--firstify", firstify, "Accept higher-order programs");
  pre->add_option("-j,--threads", threads, "Worker threads (0: all cores)");

  // query
  std::vector<std::string> labels;
  auto* query = app.add_subcommand("query", "Answer slice membership from an artifact");
  query->add_option("artifact", artifact_path, "Artifact (.json)")->required();
  query->add_option("-c,--criterion", criterion, "Criterion")->required();
  query->add_option("-l,--labels", labels, "Labels to ask about (default all)");
  query->add_option("-p,--program", program, "Check the artifact against this program");
  query->add_flag("--firstify", firstify, "The artifact was computed on the firstified program");
  query->add_flag("--strict", strict, "Reject criteria that are not prefix-closed");

  // bench
  std::string corpus, json_path;
  std::vector<std::string> criteria;
  std::size_t random = 0;
  unsigned runs = 5;
  auto* bench = app.add_subcommand("bench", "Time incremental against non-incremental slicing");
  bench->add_option("corpus", corpus, "Directory of .fsl programs")->required();
  bench->add_option("-c,--criteria", criteria, "Criteria (default: eps, eps+0, eps+1)");
  bench->add_option("--random", random, "Add N random criteria (seeded by FSLICE_SEED)");
  bench->add_option("-n,--runs", runs, "Runs per cell (median taken, at least 5)")->check(CLI::Range(5u, 1000u));
  bench->add_option("--json", json_path, "Write the JSON report here");

  // firstify
  bool show_labels = false;
  auto* fo = app.add_subcommand("firstify", "Specialize higher-order functions away");
  fo->add_option("program", program, "Program (.fsl)")->required();
  fo->add_option("-o,--out", out_path, "Output (default stdout)");
  fo->add_flag("--labels", show_labels, "Print labels");

  // run
  unsigned long long fuel = 0;
  bool trace = false, holes = false;
  auto* run = app.add_subcommand("run", "Evaluate main");
  run->add_option("program", program, "Program (.fsl)")->required();
  run->add_option("--fuel", fuel, "Step limit");
  run->add_flag("--trace", trace, "Print one line per transition to stderr");
  run->add_flag("--holes", holes, "Accept residual programs with holes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*slice) {
      Program prog;
      load(prog, program, true);
      if (dump_grammar) {
        Text g;
        check(fslice_dump_grammar(prog.p, criterion.c_str(), &g.p));
        std::cerr << g.str();
      }
      if (!dump_automaton.empty()) {
        Text a;
        check(fslice_dump_automaton(prog.p, criterion.c_str(), dump_automaton.c_str(), &a.p));
        std::cerr << a.str();
      }
      Artifact art;
      if (!artifact_path.empty()) {
        if (mode != "inc") {
          std::cerr << "fslice: usage: --artifact needs --mode inc\n";
          return 1;
        }
        check(fslice_artifact_load(artifact_path.c_str(), &art.a));
      }
      fslice_slice_options o;
      fslice_slice_options_init(&o);
      o.criterion = criterion.c_str();
      o.strict = strict;
      o.incremental = mode == "inc";
      o.firstify = firstify;
      o.threads = threads;
      o.artifact = art.a;
      Text residual, report;
      check(fslice_slice(prog.p, &o, &residual.p, report_path.empty() ? nullptr : &report.p));
      emit(out_path, residual.str());
      if (!report_path.empty()) emit(report_path, report.str());
    } else if (*pre) {
      Program prog;
      load(prog, program, true);
      Artifact art;
      check(fslice_precompute(prog.p, firstify, threads, &art.a));
      Text json;
      check(fslice_artifact_save(art.a, &json.p));
      emit(out_path, json.str());
    } else if (*query) {
      Artifact art;
      check(fslice_artifact_load(artifact_path.c_str(), &art.a));
      if (!program.empty()) {
        Program prog;
        load(prog, program, true);
        check(fslice_artifact_check(art.a, prog.p, firstify));
      }
      auto ls = c_strings(labels);
      Text json;
      check(fslice_query(art.a, criterion.c_str(), strict, ls.data(), ls.size(), &json.p));
      std::cout << json.str();
    } else if (*bench) {
      if (criteria.empty()) criteria = {"eps", "eps + 0", "eps + 1"};
      for (auto& c : random_criteria(random)) criteria.push_back(c);
      auto cs = c_strings(criteria);
      Text table, json;
      check(fslice_bench(corpus.c_str(), cs.data(), cs.size(), runs, &table.p, &json.p));
      std::cout << table.str();
      if (!json_path.empty()) emit(json_path, json.str());
    } else if (*fo) {
      Program prog;
      load(prog, program, true);
      Program first;
      check(fslice_firstify(prog.p, &first.p));
      Text text;
      check(fslice_program_print(first.p, show_labels, &text.p));
      emit(out_path, text.str());
    } else if (*run) {
      Program prog;
      load(prog, program, false, holes);
      Text value, log;
      check(fslice_run(prog.p, fuel, trace, &value.p, &log.p));
      if (trace) std::cerr << log.str();
      std::cout << value.str() << "\n";
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
