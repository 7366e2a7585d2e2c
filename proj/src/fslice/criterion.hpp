#pragma once

#include <string>
#include <string_view>

#include "fslice/nfa.hpp"

namespace fslice {

struct Criterion {
  std::string text;
  Nfa nfa;  // over {0,1}, prefix-closed, nonempty
  bool closed_automatically = false;
};

/// Regular expressions over {0,1}: `eps` (or `ε`), `0`, `1`, union `+`,
/// Kleene `*`, juxtaposition and parentheses, e.g. `eps+0+(0+1)*1`.
/// A language that is not prefix-closed is closed, or rejected if `strict`.
Criterion parse_criterion(std::string_view text, bool strict = false);

/// The regular expression alone, without closure.
Nfa parse_regex(std::string_view text);

}  // namespace fslice
