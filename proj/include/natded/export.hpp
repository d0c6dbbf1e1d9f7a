#pragma once

// Textual proof format and Isabelle/Isar theory generation.

#include <string>
#include <string_view>
#include <vector>

#include "natded/engine.hpp"
#include "natded/kernel.hpp"

namespace natded {

inline constexpr std::string_view kProofHeader = "NADEA-PROOF 1";
inline constexpr std::string_view kProofMediaType = "text/x-nadea-proof";
inline constexpr std::string_view kIsarMediaType = "text/x-isabelle-theory";

class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line, std::size_t column)
      : Error("FormatError", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Structural problem in a syntactically valid proof text (wrong premise
// count, witness shape, arity clash).
class InvariantError : public Error {
 public:
  InvariantError(const std::string& message, std::size_t line)
      : Error("InvariantError", "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ExportError : public Error {
 public:
  using Error::Error;
};

// One node per line, children indented by two spaces:
//   <Rule> | <goal> | [<assumptions>] [| <witness>]
// with formulas and terms in constructor form.
std::string serialize_proof(const Derivation& d);
// Validates structure but does not run the kernel. The witness of Exi_I
// and Uni_E may be omitted; it is then recovered from the goals.
Derivation parse_proof(std::string_view text);

// Same layout for an unfinished session; open goals carry the rule `?`
// and are rejected by parse_proof.
std::string serialize_partial(const ProofState& state);

struct UniversalPrefix {
  std::size_t count = 0;
  Formula core = Formula::falsity();
};

UniversalPrefix strip_unis(const Formula& f);
Formula put_unis(std::size_t count, const Formula& core);

// Shallow Isabelle rendering. The ASCII form uses `!`, `?`, `--->`, `&`,
// `|`; the full form uses Isabelle symbols. The formula may have up to
// `free_names` free variables; they are named as if bound by that many
// enclosing quantifiers.
std::string render_isabelle(const Formula& f, bool ascii, std::size_t free_names = 0);

struct IsarStep {
  Rule rule = Rule::Assume;
  bool simp_before = false;  // conclusion rewritten out of substitution form
  bool simp_after = false;   // a premise stated in substitution form
  enum class Discharge { Qed, QedSimp, BySimp } discharge = Discharge::Qed;
};

struct IsarCorollary {
  std::size_t quantifiers = 0;
  std::string name;
  std::string statement;
};

struct IsarDoc {
  enum class Kind { ClosedTheorem, OpenScratchTheory } kind = Kind::ClosedTheorem;
  std::string proposition_shallow;
  std::string goal_deep;
  std::vector<IsarStep> derivation_steps;  // preorder
  std::vector<std::string> derivation_lines;  // proof body of the OK statement
  std::size_t prefix_count = 0;
  std::string core_deep;
  std::vector<IsarCorollary> corollaries;
};

// Throw ExportError("Unchecked") unless check(d) passes with empty root
// assumptions and a closed goal; build_isar_open also throws
// ExportError("NoPrefix") when the goal has no outer universal.
IsarDoc build_isar_closed(const Derivation& d);
IsarDoc build_isar_open(const Derivation& d);
std::string render_isar(const IsarDoc& doc);

std::string to_isar_closed(const Derivation& d);
std::string to_isar_open(const Derivation& d);

// Rule names in `(rule X)` steps, in textual order.
std::vector<Rule> extract_rule_tokens(std::string_view isar);

}  // namespace natded
