#pragma once

// Reference implementations used as test oracles. They share no code
// with the library beyond the data types.

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "natded/semantics.hpp"

namespace natded::testing {

// Named-variable evaluator: binders get names, free Var n reads `free[n]`.
bool reference_eval(const Formula& f, const Model& m, const std::vector<Element>& free);

// Calls fn for every model of the given size over `sig`; stops early
// when fn returns false. Returns false if stopped.
bool for_each_model(const Signature& sig, std::size_t size, const std::function<bool(const Model&)>& fn);

// A model of size <= max_size (with the free variables interpreted by the
// returned environment prefix) falsifying f, found by exhaustive search.
struct Falsifier {
  Model model;
  std::vector<Element> free;
};
std::optional<Falsifier> exhaustive_falsifier(const Formula& f, std::size_t max_size);

// Propositional validity by truth table over the 0-ary predicates.
bool tautology(const Formula& f);

// Terms over `sig` and the variables Var 0 .. Var vars-1, nested up to
// `depth` applications.
std::vector<Term> small_terms(const Signature& sig, int depth, std::size_t vars = 0);

}  // namespace natded::testing
