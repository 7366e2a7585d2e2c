#include "fslice/fslice.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "fslice/artifact.hpp"
#include "fslice/bench.hpp"
#include "fslice/firstify.hpp"
#include "fslice/interpreter.hpp"

using namespace fslice;

struct fslice_program {
  Program program;
  bool first_order = true;
};

struct fslice_artifact {
  PrecomputeArtifact art;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_kind;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

struct Usage {
  std::string message;
};

template <class F>
fslice_status guard(F&& fn) {
  last_error.clear();
  last_kind.clear();
  try {
    fn();
    return FSLICE_OK;
  } catch (const Usage& u) {
    last_kind = "usage";
    last_error = u.message;
    return FSLICE_USAGE;
  } catch (const Error& e) {
    last_kind = to_string(e.kind());
    last_error = e.what();
    return e.kind() == ErrorKind::Mismatch ? FSLICE_MISMATCH : FSLICE_ANALYSIS;
  } catch (const std::exception& e) {
    last_kind = "internal";
    last_error = e.what();
    return FSLICE_ANALYSIS;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Usage{std::string(what) + " must not be null"};
}

fslice_program* make_program(std::string_view text, int flags) {
  ParseOptions po;
  po.higher_order = flags & FSLICE_PARSE_HIGHER_ORDER;
  po.allow_holes = flags & FSLICE_PARSE_ALLOW_HOLES;
  po.validate = !(flags & FSLICE_PARSE_NO_VALIDATE);
  auto* h = new fslice_program{parse_program(text, po), true};
  h->first_order = validate(h->program, false, true).empty();
  return h;
}

// The program the analysis runs on.
const Program& analysed(const fslice_program* p, int firstify_flag, std::optional<FirstifyResult>& fr) {
  if (firstify_flag) {
    fr = firstify(p->program);
    return fr->program;
  }
  if (!p->first_order)
    throw Error(ErrorKind::FirstifyUnsupported, "program is higher-order; firstify it first (--firstify)");
  return p->program;
}

nlohmann::ordered_json keep_json(const KeepMap& keep) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [label, kept] : keep) j[to_string(label)] = kept;
  return j;
}

}  // namespace

extern "C" {

const char* fslice_version(void) { return FSLICE_VERSION; }
const char* fslice_last_error(void) { return last_error.c_str(); }
const char* fslice_last_error_kind(void) { return last_kind.c_str(); }
void fslice_string_free(char* s) { std::free(s); }

fslice_status fslice_program_parse(const char* text, int flags, fslice_program** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = make_program(text, flags);
  });
}

fslice_status fslice_program_load(const char* path, int flags, fslice_program** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = make_program(read_file(path), flags);
  });
}

void fslice_program_free(fslice_program* p) { delete p; }

fslice_status fslice_program_print(const fslice_program* p, int show_labels, char** out) {
  return guard([&] {
    need(p, "program");
    put(out, print_program(p->program, show_labels));
  });
}

fslice_status fslice_program_validate(const fslice_program* p, char** out_json) {
  return guard([&] {
    need(p, "program");
    nlohmann::json j = nlohmann::json::array();
    for (const Diagnostic& d : validate(p->program, !p->first_order, true))
      j.push_back({{"code", d.code}, {"message", d.message}});
    put(out_json, j.dump());
  });
}

fslice_status fslice_program_fingerprint(const fslice_program* p, char** out) {
  return guard([&] {
    need(p, "program");
    put(out, fingerprint(p->program));
  });
}

int fslice_program_is_first_order(const fslice_program* p) { return p && p->first_order; }

fslice_status fslice_firstify(const fslice_program* ho, fslice_program** out) {
  return guard([&] {
    need(ho, "program");
    need(out, "out");
    *out = new fslice_program{firstify(ho->program).program, true};
  });
}

void fslice_slice_options_init(fslice_slice_options* o) {
  if (o) *o = fslice_slice_options{"eps", 0, 0, 0, 0, nullptr};
}

fslice_status fslice_slice(const fslice_program* p, const fslice_slice_options* o, char** out_residual,
                           char** out_report) {
  return guard([&] {
    need(p, "program");
    need(o, "options");
    need(o->criterion, "criterion");
    Criterion crit = parse_criterion(o->criterion, o->strict);
    std::optional<FirstifyResult> fr;
    const Program& target = analysed(p, o->firstify, fr);
    SliceOptions so;
    so.threads = o->threads;
    KeepMap keep;
    if (o->incremental) {
      PrecomputeArtifact local;
      const PrecomputeArtifact* art = o->artifact ? &o->artifact->art : nullptr;
      if (!art) {
        local = precompute(target, so);
        art = &local;
      }
      keep = slice_inc(target, *art, crit).keep;
    } else {
      keep = keep_noninc(target, crit.nfa, so);
    }
    if (fr) keep = map_back(p->program, *fr, keep);
    Program residual = extract_residual(p->program, keep);
    if (out_residual) put(out_residual, print_program(residual));
    if (out_report) {
      std::size_t kept = 0;
      for (const auto& [_, k] : keep) kept += k;
      nlohmann::ordered_json j;
      j["criterion"] = crit.text;
      j["prefix_closed_by_slicer"] = crit.closed_automatically;
      j["mode"] = o->incremental ? "inc" : "noninc";
      j["labels_total"] = keep.size();
      j["labels_kept"] = kept;
      j["per_label"] = keep_json(keep);
      put(out_report, j.dump(2) + "\n");
    }
  });
}

fslice_status fslice_precompute(const fslice_program* p, int firstify_flag, unsigned threads,
                                fslice_artifact** out) {
  return guard([&] {
    need(p, "program");
    need(out, "out");
    std::optional<FirstifyResult> fr;
    const Program& target = analysed(p, firstify_flag, fr);
    SliceOptions so;
    so.threads = threads;
    *out = new fslice_artifact{precompute(target, so)};
  });
}

void fslice_artifact_free(fslice_artifact* a) { delete a; }

fslice_status fslice_artifact_save(const fslice_artifact* a, char** out_json) {
  return guard([&] {
    need(a, "artifact");
    put(out_json, save_artifact(a->art));
  });
}

fslice_status fslice_artifact_write(const fslice_artifact* a, const char* path) {
  return guard([&] {
    need(a, "artifact");
    need(path, "path");
    write_file(path, save_artifact(a->art));
  });
}

fslice_status fslice_artifact_parse(const char* json, fslice_artifact** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new fslice_artifact{load_artifact(json)};
  });
}

fslice_status fslice_artifact_load(const char* path, fslice_artifact** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new fslice_artifact{load_artifact(read_file(path))};
  });
}

fslice_status fslice_artifact_check(const fslice_artifact* a, const fslice_program* p, int firstify_flag) {
  return guard([&] {
    need(a, "artifact");
    need(p, "program");
    std::optional<FirstifyResult> fr;
    if (fingerprint(analysed(p, firstify_flag, fr)) != a->art.fingerprint)
      throw Error(ErrorKind::Mismatch, "artifact was computed for a different program");
  });
}

fslice_status fslice_query(const fslice_artifact* a, const char* criterion, int strict, const char* const* labels,
                           size_t n, char** out_json) {
  return guard([&] {
    need(a, "artifact");
    need(criterion, "criterion");
    Criterion crit = parse_criterion(criterion, strict);
    KeepMap answers;
    if (!labels || n == 0) {
      answers = keep_inc(a->art, crit.nfa);
    } else {
      for (size_t i = 0; i < n; ++i) {
        need(labels[i], "label");
        auto l = parse_label(labels[i]);
        if (!l) throw Error(ErrorKind::UnknownLabel, std::string("bad label '") + labels[i] + "'");
        answers[*l] = in_slice(a->art, *l, crit.nfa);
      }
    }
    put(out_json, keep_json(answers).dump() + "\n");
  });
}

fslice_status fslice_run(const fslice_program* p, unsigned long long fuel, int trace, char** out_value,
                         char** out_trace) {
  return guard([&] {
    need(p, "program");
    std::ostringstream log;
    RunOptions ro;
    if (fuel) ro.fuel = fuel;
    if (trace) ro.trace = &log;
    RunResult r = run_program(p->program, ro);
    put(out_value, render_value(r.value, r.heap));
    if (trace) put(out_trace, log.str());
  });
}

fslice_status fslice_dump_grammar(const fslice_program* p, const char* criterion, char** out) {
  return guard([&] {
    need(p, "program");
    std::optional<FirstifyResult> fr;
    Grammar g = generate_equations(analysed(p, 0, fr));
    if (criterion) g = with_criterion(g, parse_criterion(criterion).nfa);
    put(out, g.dump());
  });
}

fslice_status fslice_dump_automaton(const fslice_program* p, const char* criterion, const char* label,
                                    char** out_json) {
  return guard([&] {
    need(p, "program");
    need(criterion, "criterion");
    need(label, "label");
    std::optional<FirstifyResult> fr;
    const Program& target = analysed(p, 0, fr);
    auto l = parse_label(label);
    bool found = false;
    if (l)
      for (const LabelSite& s : collect_labels(target)) found = found || s.label == *l;
    if (!found) throw Error(ErrorKind::UnknownLabel, std::string("no label '") + label + "' in program");
    Grammar g = with_criterion(generate_equations(target), parse_criterion(criterion).nfa);
    put(out_json, automaton_to_json(demand_automaton(g, *l)).dump() + "\n");
  });
}

fslice_status fslice_bench(const char* dir, const char* const* criteria, size_t n, unsigned runs, char** out_table,
                           char** out_json) {
  return guard([&] {
    need(dir, "dir");
    std::vector<std::string> cs;
    for (size_t i = 0; i < n; ++i) {
      need(criteria[i], "criterion");
      cs.push_back(criteria[i]);
    }
    BenchOptions bo;
    if (runs) bo.runs = runs;
    BenchReport report = bench_corpus(dir, cs, bo);
    put(out_table, render_table(report));
    put(out_json, to_json(report).dump(2) + "\n");
  });
}

}  // extern "C"
