#pragma once

#include <string>

#include <json.hpp>

#include "fslice/slicer.hpp"

namespace fslice {

/// {"states": [0..n-1], "start": s, "finals": [...], "trans": [[p, "0"|"1"|"eps", q], ...]}
nlohmann::json automaton_to_json(const Nfa& a);
Nfa automaton_from_json(const nlohmann::json& j);

/// Deterministic text: sorted keys, no timestamps, trailing newline.
std::string save_artifact(const PrecomputeArtifact& art);
PrecomputeArtifact load_artifact(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fslice
