#include "fslice/demand.hpp"

#include <sstream>

#include "fslice/error.hpp"

namespace fslice {

std::string to_debug(const SymString& s) {
  if (s.empty()) return "eps";
  std::string out;
  for (char c : s) {
    if (!out.empty()) out += ' ';
    switch (c) {
      case 'a': out += "0b"; break;
      case 'b': out += "1b"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_debug(const DemandSet& d) {
  std::string out = "{";
  bool first = true;
  for (const auto& s : d) {
    if (!first) out += ", ";
    first = false;
    out += to_debug(s);
  }
  return out + "}";
}

SymString parse_debug(std::string_view text) {
  std::istringstream is{std::string(text)};
  SymString out;
  std::string tok;
  while (is >> tok) {
    if (tok == "eps") continue;
    if (tok == "0" || tok == "1" || tok == "2" || tok == "$")
      out += tok[0];
    else if (tok == "0b" || tok == "0\xCC\x84")
      out += 'a';
    else if (tok == "1b" || tok == "1\xCC\x84")
      out += 'b';
    else
      throw Error(ErrorKind::Syntax, "bad demand symbol '" + tok + "'");
  }
  return out;
}

// Right to left, keeping the simplified suffix. After a `2` every suffix that
// survived collapses to ε; bars must cancel the matching selector.
std::optional<SymString> simplify(const SymString& s) {
  SymString v;  // reversed, so the head of the suffix is v.back()
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    switch (*it) {
      case '0':
      case '1': v.push_back(*it); break;
      case 'a':
      case 'b': {
        char want = *it == 'a' ? '0' : '1';
        if (v.empty() || v.back() != want) return std::nullopt;
        v.pop_back();
        break;
      }
      case '2': v.clear(); break;
      default: throw Error(ErrorKind::Syntax, "unexpected symbol in demand string");
    }
  }
  return SymString(v.rbegin(), v.rend());
}

DemandSet simplify(const DemandSet& d) {
  DemandSet out;
  for (const auto& s : d)
    if (auto r = simplify(s)) out.insert(std::move(*r));
  return out;
}

std::optional<SymString> canonicalize(const SymString& s) {
  SymString c;  // reversed
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    switch (*it) {
      case '0':
      case '1':
      case '2': c.push_back(*it); break;
      case 'a':
      case 'b': {
        char sel = *it == 'a' ? '0' : '1';
        if (c.empty() || is_bar(c.back())) {
          c.push_back(*it);
        } else if (c.back() == sel) {
          c.pop_back();
        } else {
          return std::nullopt;
        }
        break;
      }
      default: throw Error(ErrorKind::Syntax, "unexpected symbol in demand string");
    }
  }
  return SymString(c.rbegin(), c.rend());
}

DemandSet canonicalize(const DemandSet& d) {
  DemandSet out;
  for (const auto& s : d)
    if (auto r = canonicalize(s)) out.insert(std::move(*r));
  return out;
}

bool is_canonical(const SymString& s) {
  bool in_bars = false;
  for (char c : s) {
    if (is_bar(c))
      in_bars = true;
    else if (in_bars || c == '$')
      return false;
  }
  return true;
}

DemandSet concat(const DemandSet& a, const DemandSet& b) {
  DemandSet out;
  for (const auto& x : a)
    for (const auto& y : b) out.insert(x + y);
  return out;
}

DemandSet prefix_close(const DemandSet& d) {
  DemandSet out;
  for (const auto& s : d)
    for (std::size_t n = 0; n <= s.size(); ++n) out.insert(s.substr(0, n));
  return out;
}

bool is_prefix_closed(const DemandSet& d) {
  for (const auto& s : d)
    if (!s.empty() && !d.contains(s.substr(0, s.size() - 1))) return false;
  return true;
}

}  // namespace fslice
