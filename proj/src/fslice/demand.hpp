#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace fslice {

/// Symbols of symbolic demand strings. `$` only exists inside simplification.
enum class DSym : char {
  Sel0 = '0',
  Sel1 = '1',
  Bar0 = 'a',  // 0̄
  Bar1 = 'b',  // 1̄
  Two = '2',
  End = '$',
};

/// A symbolic string stores one DSym char per symbol.
using SymString = std::string;
using DemandSet = std::set<SymString>;

inline bool is_bar(char c) { return c == 'a' || c == 'b'; }

/// Space separated `0 1 0b 1b 2 $`; the empty string prints as `eps`.
std::string to_debug(const SymString& s);
std::string to_debug(const DemandSet& d);
SymString parse_debug(std::string_view text);

/// Simplification of a single string: nullopt when the string reduces to ⊥.
std::optional<SymString> simplify(const SymString& s);
DemandSet simplify(const DemandSet& d);

/// Canonicalization of a single string; nullopt when it vanishes.
std::optional<SymString> canonicalize(const SymString& s);
DemandSet canonicalize(const DemandSet& d);

/// (0+1+2)*(0̄+1̄)*
bool is_canonical(const SymString& s);

DemandSet concat(const DemandSet& a, const DemandSet& b);
DemandSet prefix_close(const DemandSet& d);
bool is_prefix_closed(const DemandSet& d);

}  // namespace fslice
