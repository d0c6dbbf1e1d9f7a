#pragma once

// The trusted core: membership, newness, substitution and the checker for
// explicit derivation trees. A derivation accepted by `check` is proved.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natded/syntax.hpp"

namespace natded {

enum class Rule {
  Assume, Boole, Imp_E, Imp_I, Dis_E, Dis_I1, Dis_I2,
  Con_E1, Con_E2, Con_I, Exi_E, Exi_I, Uni_E, Uni_I,
};

inline constexpr std::array<Rule, 14> kAllRules{
    Rule::Assume, Rule::Boole,  Rule::Imp_E,  Rule::Imp_I,  Rule::Dis_E, Rule::Dis_I1, Rule::Dis_I2,
    Rule::Con_E1, Rule::Con_E2, Rule::Con_I,  Rule::Exi_E,  Rule::Exi_I, Rule::Uni_E,  Rule::Uni_I,
};

std::string_view rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

// Number of premises the rule takes.
std::size_t rule_arity(Rule r);
// Exi_E, Exi_I, Uni_E, Uni_I carry a term.
bool rule_has_witness(Rule r);
// Exi_E and Uni_I: the term is a fresh constant.
bool rule_introduces_constant(Rule r);

struct Derivation {
  Rule rule = Rule::Assume;
  Formula goal = Formula::falsity();
  std::vector<Formula> assumptions;
  std::optional<Term> witness;
  std::vector<Derivation> premises;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

enum class CheckFailureKind { Malformed, RuleViolation };

struct CheckFailure {
  // Premise indices from the root to the offending node.
  std::vector<std::size_t> path;
  CheckFailureKind kind = CheckFailureKind::RuleViolation;
  std::string reason;
};

struct CheckReport {
  bool ok = true;
  std::optional<CheckFailure> failure;
};

bool member(const Formula& p, const std::vector<Formula>& z);

bool new_term(const Id& c, const Term& t);
bool new_list(const Id& c, const std::vector<Term>& ts);
bool new_formula(const Id& c, const Formula& f);
bool news(const Id& c, const std::vector<Formula>& z);

Term inc_term(const Term& t);
std::vector<Term> inc_list(const std::vector<Term>& ts);

// Replaces Var i by s and closes the gap: variables above i move down one,
// matching the removal of the binder that i referred to. Under a
// quantifier the target becomes i + 1 and s is lifted with inc_term, so no
// variable of s can be captured.
Term sub_term(std::size_t i, const Term& s, const Term& t);
std::vector<Term> sub_list(std::size_t i, const Term& s, const std::vector<Term>& ts);
Formula sub(std::size_t i, const Term& s, const Formula& f);

// Preorder: the first violated node wins.
CheckReport check(const Derivation& d);

// Preorder rule sequence.
std::vector<Rule> rule_sequence(const Derivation& d);

}  // namespace natded
