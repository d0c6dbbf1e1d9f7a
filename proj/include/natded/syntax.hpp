#pragma once

// First-order terms and formulas with de Bruijn indices, the surface
// syntax parser, and the three printers.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natded/error.hpp"

namespace natded {

// Predicate, function or constant symbol: [A-Za-z][A-Za-z0-9_']*.
using Id = std::string;

bool is_valid_id(std::string_view text);

class Term {
 public:
  enum class Kind { Var, Fun };

  static Term var(std::size_t index);
  static Term fun(Id name, std::vector<Term> args = {});

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_constant() const { return kind_ == Kind::Fun && args_.empty(); }
  std::size_t index() const { return index_; }
  const Id& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term() = default;

  Kind kind_ = Kind::Var;
  std::size_t index_ = 0;
  Id name_;
  std::vector<Term> args_;
};

class Formula {
 public:
  enum class Kind { Falsity, Pre, Imp, Dis, Con, Exi, Uni };

  static Formula falsity();
  static Formula pre(Id name, std::vector<Term> args = {});
  static Formula imp(Formula lhs, Formula rhs);
  static Formula dis(Formula lhs, Formula rhs);
  static Formula con(Formula lhs, Formula rhs);
  static Formula exi(Formula body);
  static Formula uni(Formula body);
  // Sugar: ¬p is p ⟶ ⊥, ⊤ is ⊥ ⟶ ⊥, p ↔ q is (p ⟶ q) ∧ (q ⟶ p).
  static Formula neg(Formula body);
  static Formula truth();
  static Formula iff(Formula lhs, Formula rhs);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  bool is_binary() const { return kind_ == Kind::Imp || kind_ == Kind::Dis || kind_ == Kind::Con; }
  bool is_quantifier() const { return kind_ == Kind::Exi || kind_ == Kind::Uni; }

  // Pre only.
  const Id& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }
  // Imp, Dis, Con.
  const Formula& lhs() const { return parts_.at(0); }
  const Formula& rhs() const { return parts_.at(1); }
  // Exi, Uni.
  const Formula& body() const { return parts_.at(0); }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  Formula() = default;

  Kind kind_ = Kind::Falsity;
  Id name_;
  std::vector<Term> args_;
  std::vector<Formula> parts_;
};

// Function and predicate symbols with their arities. Separate namespaces.
struct Signature {
  std::map<Id, std::size_t> functions;
  std::map<Id, std::size_t> predicates;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Collects symbols of `f` into `sig`. Returns the first symbol that clashes
// with an arity already recorded (in `sig` or earlier in `f`), if any.
std::optional<Id> collect_signature(const Formula& f, Signature& sig);
std::optional<Id> collect_signature(const Term& t, Signature& sig);
Signature signature_of(const Formula& f);

// Ids valid and every symbol used with a single arity.
bool is_well_formed(const Formula& f);
// Throws Error("IllFormed") describing the first violation.
void require_well_formed(const Formula& f);

// Number of free de Bruijn variables is zero.
bool is_closed(const Formula& f);
bool is_closed(const Term& t);
// One more than the largest free variable index, 0 when closed.
std::size_t free_bound(const Formula& f);

// Surface syntax. Named binders become de Bruijn indices; free names are
// rejected, `#n` denotes Var n. See docs/grammar.md.
Formula parse_formula(std::string_view text);
// A surface term outside any binder: constants, applications and `#n`.
Term parse_term(std::string_view text);

// Constructor form, e.g. `Imp (Pre ''A'' []) Falsity`.
Formula parse_deep_formula(std::string_view text);
Term parse_deep_term(std::string_view text);
// `[f1, f2, ...]` in constructor form.
std::vector<Formula> parse_deep_formula_list(std::string_view text);

enum class PrintStyle { Named, Typewriter, DeepEmbed };

std::string render_formula(const Formula& f, PrintStyle style);
std::string render_term(const Term& t, PrintStyle style);
std::string render_deep_formula_list(const std::vector<Formula>& fs);

// Generated bound names: x, y, z, u, v, w, x1, y1, ... skipping `avoid`.
std::vector<std::string> bound_names(std::size_t count, const Signature& avoid);

// Names the printers reserve for bound variables; a constant with such a
// name prints as `name()` in surface syntax.
bool is_variable_like(std::string_view name);

}  // namespace natded
