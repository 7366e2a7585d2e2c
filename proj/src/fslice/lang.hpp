//===- lang.hpp - Labeled ANF language: AST, parser, printer -------------===//
//
// Programs are a list of zero or more function definitions, one of which is
// the zero-argument `main`. Every expression, application and variable
// occurrence carries a program-wide unique Label.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fslice/error.hpp"

namespace fslice {

struct Label {
  std::uint32_t id = 0;
  auto operator<=>(const Label&) const = default;
};

std::string to_string(Label label);  // "pi7"
std::optional<Label> parse_label(std::string_view text);  // "pi7", "π7", "7"

enum class PrimOp { Add, Sub, Mul, Eq };

const char* to_string(PrimOp op);

/// One use of a variable. A hole occurrence prints as `□` in residuals.
struct VarRef {
  std::string name;
  Label label;
  bool pinned = false;
  bool hole = false;
  bool operator==(const VarRef&) const = default;
};

enum class AppKind { Const, Nil, Cons, Car, Cdr, NullQ, Prim, Call, Hole };

struct App {
  AppKind kind = AppKind::Hole;
  Label label;
  bool pinned = false;
  std::int64_t value = 0;  // Const
  PrimOp op = PrimOp::Add;  // Prim
  std::string callee;       // Call
  std::vector<VarRef> args;
  bool operator==(const App&) const = default;
};

using ExprId = std::uint32_t;

enum class ExprKind { If, Let, Return };

/// If:     subject = guard, first = then-branch, second = else-branch.
/// Let:    bound <- rhs in first.
/// Return: subject.
struct Expr {
  ExprKind kind = ExprKind::Return;
  Label label;
  bool pinned = false;
  VarRef subject;
  std::string bound;
  App rhs;
  ExprId first = 0;
  ExprId second = 0;
  bool operator==(const Expr&) const = default;
};

struct Param {
  std::string name;
  bool hole = false;
  bool operator==(const Param&) const = default;
};

struct FunDef {
  std::string name;
  std::vector<Param> params;
  ExprId body = 0;
  bool operator==(const FunDef&) const = default;
};

struct Program {
  std::vector<FunDef> defs;
  std::vector<Expr> exprs;  // arena; FunDef::body and Expr children index it

  const Expr& expr(ExprId id) const { return exprs.at(id); }
  Expr& expr(ExprId id) { return exprs.at(id); }

  const FunDef* find(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  const FunDef& main() const;

  /// Structural equality ignoring arena layout.
  bool same_as(const Program& other) const;
};

enum class SiteKind { Expr, App, Occurrence };

/// Where a label lives. `arg` is the argument index for App occurrences and
/// -1 for the subject of an If/Return.
struct LabelSite {
  Label label;
  SiteKind kind;
  std::size_t function;
  ExprId expr;
  int arg = -1;
};

/// All labels in pre-order (definition order, then tree order).
std::vector<LabelSite> collect_labels(const Program& program);

/// Visits every expression of a function body in pre-order.
void for_each_expr(const Program& program, ExprId root,
                   const std::function<void(ExprId, const Expr&)>& fn);

bool is_primitive_name(std::string_view name);

struct ParseOptions {
  bool validate = true;
  bool higher_order = false;  // accept variable callees and function values
  bool allow_holes = false;
};

/// Parses `.fsl` source. Labels are assigned in pre-order; a `πN:` (or
/// `piN:`) prefix pins a label and the remaining ones skip pinned numbers.
Program parse_program(std::string_view text, const ParseOptions& options = {});

struct Diagnostic {
  std::string code;  // "unbound-variable", "duplicate-variable", ...
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::vector<Diagnostic> validate(const Program& program, bool higher_order = false,
                                 bool allow_holes = false);

/// Pinned labels are always printed; others only with `show_labels`.
std::string print_program(const Program& program, bool show_labels = false);

/// Collapses whitespace so printed programs can be compared textually.
std::string normalize_whitespace(std::string_view text);

}  // namespace fslice

template <>
struct std::hash<fslice::Label> {
  std::size_t operator()(fslice::Label l) const noexcept { return std::hash<std::uint32_t>{}(l.id); }
};
