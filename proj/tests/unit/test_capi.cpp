#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fslice/fslice.h"

namespace fs = std::filesystem;

namespace {

const std::string kLcc = FSLICE_TEST_DIR "/corpus/linecharcount.fsl";
const std::string kHof = FSLICE_TEST_DIR "/corpus_ho/hof.fsl";

std::string take(char* s) {
  std::string out = s ? s : "";
  fslice_string_free(s);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string squash(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space && c != ')' && out.back() != '(') out += ' ';
    space = false;
    out += c;
  }
  return out;
}

struct Cli {
  int code;
  std::string out;
};

Cli cli(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "fslice_cli_out.txt";
  std::string cmd = std::string(FSLICE_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST_CASE("parse, print and validate through the C API") {
  fslice_program* p = nullptr;
  REQUIRE(fslice_program_load(kLcc.c_str(), 0, &p) == FSLICE_OK);
  char* text = nullptr;
  CHECK(fslice_program_print(p, 1, &text) == FSLICE_OK);
  CHECK(take(text).find("π1:") != std::string::npos);
  char* diags = nullptr;
  CHECK(fslice_program_validate(p, &diags) == FSLICE_OK);
  CHECK(take(diags) == "[]");
  CHECK(fslice_program_is_first_order(p));
  fslice_program_free(p);

  fslice_program* bad = nullptr;
  CHECK(fslice_program_parse("(define (main)", 0, &bad) == FSLICE_ANALYSIS);
  CHECK(std::string(fslice_last_error_kind()) == "syntax error");
  CHECK(bad == nullptr);
  CHECK(fslice_program_parse(nullptr, 0, &bad) == FSLICE_USAGE);
}

TEST_CASE("slice, precompute and query through the C API") {
  fslice_program* p = nullptr;
  REQUIRE(fslice_program_load(kLcc.c_str(), 0, &p) == FSLICE_OK);
  fslice_slice_options o;
  fslice_slice_options_init(&o);
  o.criterion = "eps + 0";
  char *res = nullptr, *report = nullptr;
  REQUIRE(fslice_slice(p, &o, &res, &report) == FSLICE_OK);
  std::string noninc = take(res);
  std::string rep = take(report);
  CHECK(squash(noninc) == squash(slurp(FSLICE_TEST_DIR "/golden/linecharcount_eps0.fsl")));
  CHECK(rep.find("\"labels_total\"") != std::string::npos);
  CHECK(rep.find("\"pi1\": true") != std::string::npos);

  fslice_artifact* art = nullptr;
  REQUIRE(fslice_precompute(p, 0, 1, &art) == FSLICE_OK);
  o.incremental = 1;
  o.artifact = art;
  REQUIRE(fslice_slice(p, &o, &res, nullptr) == FSLICE_OK);
  CHECK(take(res) == noninc);

  const char* labels[] = {"pi1"};
  char* json = nullptr;
  REQUIRE(fslice_query(art, "eps + 1", 0, labels, 1, &json) == FSLICE_OK);
  CHECK(take(json) == "{\"pi1\":false}\n");
  const char* unknown[] = {"pi99999"};
  CHECK(fslice_query(art, "eps", 0, unknown, 1, &json) == FSLICE_ANALYSIS);

  char* saved = nullptr;
  REQUIRE(fslice_artifact_save(art, &saved) == FSLICE_OK);
  fslice_artifact* back = nullptr;
  std::string s = take(saved);
  REQUIRE(fslice_artifact_parse(s.c_str(), &back) == FSLICE_OK);
  CHECK(fslice_artifact_check(back, p, 0) == FSLICE_OK);

  fslice_program* other = nullptr;
  REQUIRE(fslice_program_parse("(define (main) (let x <- 1 in (return x)))", 0, &other) == FSLICE_OK);
  CHECK(fslice_artifact_check(back, other, 0) == FSLICE_MISMATCH);
  o.artifact = back;
  CHECK(fslice_slice(other, &o, &res, nullptr) == FSLICE_MISMATCH);

  o.criterion = "";
  o.incremental = 0;
  CHECK(fslice_slice(p, &o, &res, nullptr) == FSLICE_ANALYSIS);

  fslice_program_free(other);
  fslice_artifact_free(back);
  fslice_artifact_free(art);
  fslice_program_free(p);
}

TEST_CASE("higher-order programs through the C API") {
  fslice_program* p = nullptr;
  REQUIRE(fslice_program_load(kHof.c_str(), FSLICE_PARSE_HIGHER_ORDER, &p) == FSLICE_OK);
  CHECK_FALSE(fslice_program_is_first_order(p));
  fslice_artifact* art = nullptr;
  CHECK(fslice_precompute(p, 0, 1, &art) == FSLICE_ANALYSIS);
  CHECK(std::string(fslice_last_error()).find("--firstify") != std::string::npos);
  fslice_slice_options o;
  fslice_slice_options_init(&o);
  o.criterion = "eps + 0";
  o.firstify = 1;
  char *a = nullptr, *b = nullptr;
  REQUIRE(fslice_slice(p, &o, &a, nullptr) == FSLICE_OK);
  o.incremental = 1;
  REQUIRE(fslice_slice(p, &o, &b, nullptr) == FSLICE_OK);
  std::string noninc = take(a);
  CHECK(noninc == take(b));
  CHECK(squash(noninc) == squash(slurp(FSLICE_TEST_DIR "/golden/hof_slice_eps0.fsl")));
  fslice_program* fo = nullptr;
  REQUIRE(fslice_firstify(p, &fo) == FSLICE_OK);
  CHECK(fslice_program_is_first_order(fo));
  fslice_program_free(fo);
  fslice_program_free(p);
}

TEST_CASE("run, dumps and bench through the C API") {
  fslice_program* p = nullptr;
  REQUIRE(fslice_program_load(kLcc.c_str(), 0, &p) == FSLICE_OK);
  char *value = nullptr, *trace = nullptr;
  REQUIRE(fslice_run(p, 0, 1, &value, &trace) == FSLICE_OK);
  CHECK(take(value) == "(1 . 3)");
  CHECK(take(trace).find("let-fncall") != std::string::npos);
  char* g = nullptr;
  REQUIRE(fslice_dump_grammar(p, "eps + 0", &g) == FSLICE_OK);
  CHECK(take(g).find("L[linecharcount,2] -> 0b") != std::string::npos);
  char* a = nullptr;
  REQUIRE(fslice_dump_automaton(p, "eps + 0", "pi1", &a) == FSLICE_OK);
  CHECK(take(a).find("\"trans\"") != std::string::npos);
  CHECK(fslice_dump_automaton(p, "eps", "pi424242", &a) == FSLICE_ANALYSIS);
  fslice_program_free(p);

  fs::path dir = fs::temp_directory_path() / "fslice_capi_bench";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const char* crit[] = {"eps"};
  char *table = nullptr, *json = nullptr;
  REQUIRE(fslice_bench(dir.c_str(), crit, 1, 5, &table, &json) == FSLICE_OK);
  CHECK(take(json).find("\"rows\": []") != std::string::npos);
  take(table);
}

TEST_CASE("command line") {
  fs::path tmp = fs::temp_directory_path();
  std::string art = (tmp / "fslice_cli_art.json").string();

  Cli s = cli("slice " + kLcc + " --criterion 'eps + 0'");
  CHECK(s.code == 0);
  CHECK(squash(s.out) == squash(slurp(FSLICE_TEST_DIR "/golden/linecharcount_eps0.fsl")));
  CHECK(squash(cli("slice " + kLcc + " -c 'eps + 1' --mode inc").out) ==
        squash(slurp(FSLICE_TEST_DIR "/golden/linecharcount_eps1.fsl")));
  CHECK(cli("slice " + kLcc + " --criterion ''").code == 2);
  CHECK(cli("slice " + kLcc).code == 1);
  CHECK(cli("slice " + kLcc + " -c eps --mode fast").code == 1);
  CHECK(cli("slice /nonexistent.fsl -c eps").code == 2);
  CHECK(cli("").code == 1);

  REQUIRE(cli("precompute " + kLcc + " --out " + art).code == 0);
  std::string first = slurp(art);
  REQUIRE(cli("precompute " + kLcc + " --out " + art).code == 0);
  CHECK(slurp(art) == first);

  Cli q = cli("query " + art + " -c 'eps + 0' -l pi1");
  CHECK(q.code == 0);
  CHECK(q.out == "{\"pi1\":true}\n");
  CHECK(cli("query " + art + " -c 'eps + 1' -l pi1").out == "{\"pi1\":false}\n");
  CHECK(cli("query " + art + " -c eps").out.find("\"pi2\"") != std::string::npos);
  CHECK(cli("query " + art + " -c eps -p " + FSLICE_TEST_DIR "/corpus/swap.fsl").code == 3);
  CHECK(cli("query " + art + " -c eps -p " + kLcc).code == 0);
  CHECK(cli(std::string("slice ") + FSLICE_TEST_DIR "/corpus/swap.fsl -c eps --mode inc --artifact " + art).code == 3);
  CHECK(cli("query " + art + " -c eps -l pi77777").code == 2);

  CHECK(cli("precompute " + kHof).code == 2);
  CHECK(cli("slice " + kHof + " -c 'eps + 0' --firstify").code == 0);
  CHECK(cli("firstify " + kHof).out.find("hof_car") != std::string::npos);
  CHECK(cli("run " + kLcc).out == "(1 . 3)\n");
  CHECK(cli("--version").out.find(fslice_version()) != std::string::npos);
}
