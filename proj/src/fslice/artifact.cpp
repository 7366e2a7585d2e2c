#include "fslice/artifact.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fslice {

using nlohmann::json;

json automaton_to_json(const Nfa& a) {
  json states = json::array();
  json finals = json::array();
  json trans = json::array();
  for (StateId q = 0; q < a.size(); ++q) {
    states.push_back(q);
    if (a.finals[q]) finals.push_back(q);
    auto edges = a.adj[q];
    std::sort(edges.begin(), edges.end());
    for (auto [s, r] : edges) trans.push_back(json::array({q, sym_name(s), r}));
  }
  return json{{"states", states}, {"start", a.start}, {"finals", finals}, {"trans", trans}};
}

Nfa automaton_from_json(const json& j) {
  auto bad = [](const std::string& what) { return Error(ErrorKind::Artifact, "malformed automaton: " + what); };
  if (!j.is_object() || !j.contains("states") || !j.contains("start") || !j.contains("finals") || !j.contains("trans"))
    throw bad("missing fields");
  Nfa a;
  std::size_t n = j.at("states").size();
  for (std::size_t i = 0; i < n; ++i) a.add_state(false);
  auto state = [&](const json& v) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() >= n) throw bad("state out of range");
    return v.get<StateId>();
  };
  a.start = state(j.at("start"));
  for (const json& f : j.at("finals")) a.finals[state(f)] = true;
  for (const json& t : j.at("trans")) {
    if (!t.is_array() || t.size() != 3 || !t[1].is_string()) throw bad("transition");
    std::string s = t[1].get<std::string>();
    Sym sym;
    if (s == "0")
      sym = Sym::Sel0;
    else if (s == "1")
      sym = Sym::Sel1;
    else if (s == "eps")
      sym = Sym::Eps;
    else
      throw bad("symbol '" + s + "'");
    a.add(state(t[0]), sym, state(t[2]));
  }
  return a;
}

std::string save_artifact(const PrecomputeArtifact& art) {
  json automata = json::object();
  for (const auto& [label, a] : art.automata) automata[to_string(label)] = automaton_to_json(a);
  json j{{"version", art.version}, {"fingerprint", art.fingerprint}, {"automata", automata}};
  return j.dump() + "\n";
}

PrecomputeArtifact load_artifact(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Artifact, std::string("artifact is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("fingerprint") || !j.contains("automata") || !j.at("automata").is_object())
    throw Error(ErrorKind::Artifact, "artifact lacks fingerprint or automata");
  PrecomputeArtifact art;
  art.version = j.value("version", "");
  art.fingerprint = j.at("fingerprint").get<std::string>();
  for (const auto& [key, value] : j.at("automata").items()) {
    auto label = parse_label(key);
    if (!label) throw Error(ErrorKind::Artifact, "bad label key '" + key + "'");
    art.automata[*label] = automaton_from_json(value);
  }
  return art;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace fslice
