#include "natded/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace natded {

bool is_valid_id(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) return false;
  for (char ch : text.substr(1)) {
    auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_' && c != '\'') return false;
  }
  return true;
}

bool is_variable_like(std::string_view name) {
  if (name.empty() || std::string_view("uvwxyz").find(name.front()) == std::string_view::npos) return false;
  for (char ch : name.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) && ch != '\'') return false;
  }
  return true;
}

Term Term::var(std::size_t index) {
  Term t;
  t.kind_ = Kind::Var;
  t.index_ = index;
  return t;
}

Term Term::fun(Id name, std::vector<Term> args) {
  Term t;
  t.kind_ = Kind::Fun;
  t.name_ = std::move(name);
  t.args_ = std::move(args);
  return t;
}

Formula Formula::falsity() { return Formula(); }

Formula Formula::pre(Id name, std::vector<Term> args) {
  Formula f;
  f.kind_ = Kind::Pre;
  f.name_ = std::move(name);
  f.args_ = std::move(args);
  return f;
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Imp;
  f.parts_.push_back(std::move(lhs));
  f.parts_.push_back(std::move(rhs));
  return f;
}

Formula Formula::dis(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Dis;
  f.parts_.push_back(std::move(lhs));
  f.parts_.push_back(std::move(rhs));
  return f;
}

Formula Formula::con(Formula lhs, Formula rhs) {
  Formula f;
  f.kind_ = Kind::Con;
  f.parts_.push_back(std::move(lhs));
  f.parts_.push_back(std::move(rhs));
  return f;
}

Formula Formula::exi(Formula body) {
  Formula f;
  f.kind_ = Kind::Exi;
  f.parts_.push_back(std::move(body));
  return f;
}

Formula Formula::uni(Formula body) {
  Formula f;
  f.kind_ = Kind::Uni;
  f.parts_.push_back(std::move(body));
  return f;
}

Formula Formula::neg(Formula body) { return imp(std::move(body), falsity()); }

Formula Formula::truth() { return imp(falsity(), falsity()); }

Formula Formula::iff(Formula lhs, Formula rhs) {
  return con(imp(lhs, rhs), imp(rhs, lhs));
}

namespace {

std::optional<Id> record(std::map<Id, std::size_t>& table, const Id& name, std::size_t arity) {
  auto [it, inserted] = table.emplace(name, arity);
  if (!inserted && it->second != arity) return name;
  return std::nullopt;
}

std::optional<Id> first_invalid_id(const Term& t) {
  if (t.is_var()) return std::nullopt;
  if (!is_valid_id(t.name())) return t.name();
  for (const auto& a : t.args()) {
    if (auto bad = first_invalid_id(a)) return bad;
  }
  return std::nullopt;
}

std::optional<Id> first_invalid_id(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return std::nullopt;
    case Formula::Kind::Pre:
      if (!is_valid_id(f.name())) return f.name();
      for (const auto& a : f.args()) {
        if (auto bad = first_invalid_id(a)) return bad;
      }
      return std::nullopt;
    case Formula::Kind::Exi:
    case Formula::Kind::Uni:
      return first_invalid_id(f.body());
    default:
      if (auto bad = first_invalid_id(f.lhs())) return bad;
      return first_invalid_id(f.rhs());
  }
}

bool term_closed_under(const Term& t, std::size_t depth) {
  if (t.is_var()) return t.index() < depth;
  for (const auto& a : t.args()) {
    if (!term_closed_under(a, depth)) return false;
  }
  return true;
}

std::size_t term_free_bound(const Term& t, std::size_t depth) {
  if (t.is_var()) return t.index() >= depth ? t.index() - depth + 1 : 0;
  std::size_t best = 0;
  for (const auto& a : t.args()) best = std::max(best, term_free_bound(a, depth));
  return best;
}

std::size_t formula_free_bound(const Formula& f, std::size_t depth) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return 0;
    case Formula::Kind::Pre: {
      std::size_t best = 0;
      for (const auto& a : f.args()) best = std::max(best, term_free_bound(a, depth));
      return best;
    }
    case Formula::Kind::Exi:
    case Formula::Kind::Uni:
      return formula_free_bound(f.body(), depth + 1);
    default:
      return std::max(formula_free_bound(f.lhs(), depth), formula_free_bound(f.rhs(), depth));
  }
}

}  // namespace

std::optional<Id> collect_signature(const Term& t, Signature& sig) {
  if (t.is_var()) return std::nullopt;
  if (auto clash = record(sig.functions, t.name(), t.args().size())) return clash;
  for (const auto& a : t.args()) {
    if (auto clash = collect_signature(a, sig)) return clash;
  }
  return std::nullopt;
}

std::optional<Id> collect_signature(const Formula& f, Signature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return std::nullopt;
    case Formula::Kind::Pre:
      if (auto clash = record(sig.predicates, f.name(), f.args().size())) return clash;
      for (const auto& a : f.args()) {
        if (auto clash = collect_signature(a, sig)) return clash;
      }
      return std::nullopt;
    case Formula::Kind::Exi:
    case Formula::Kind::Uni:
      return collect_signature(f.body(), sig);
    default:
      if (auto clash = collect_signature(f.lhs(), sig)) return clash;
      return collect_signature(f.rhs(), sig);
  }
}

Signature signature_of(const Formula& f) {
  Signature sig;
  collect_signature(f, sig);
  return sig;
}

bool is_well_formed(const Formula& f) {
  Signature sig;
  return !first_invalid_id(f) && !collect_signature(f, sig);
}

void require_well_formed(const Formula& f) {
  if (auto bad = first_invalid_id(f)) throw Error("IllFormed", "invalid identifier '" + *bad + "'");
  Signature sig;
  if (auto clash = collect_signature(f, sig)) {
    throw Error("IllFormed", "symbol '" + *clash + "' is used with more than one arity");
  }
}

bool is_closed(const Term& t) { return term_closed_under(t, 0); }

bool is_closed(const Formula& f) { return free_bound(f) == 0; }

std::size_t free_bound(const Formula& f) { return formula_free_bound(f, 0); }

}  // namespace natded
