#pragma once

// Finite-model semantics and countermodel search.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "natded/syntax.hpp"

namespace natded {

using Element = std::size_t;

// Variable denotation: Var n ↦ element. Indices past the stored prefix map
// to `fallback`, so the environment is total.
class Environment {
 public:
  Environment() = default;
  explicit Environment(std::vector<Element> prefix, Element fallback = 0)
      : prefix_(std::move(prefix)), fallback_(fallback) {}

  Element operator()(std::size_t n) const { return n < prefix_.size() ? prefix_[n] : fallback_; }

  // result(0) = d, result(n + 1) = this(n).
  Environment extend(Element d) const;

  const std::vector<Element>& prefix() const { return prefix_; }
  Element fallback() const { return fallback_; }

  friend bool operator==(const Environment&, const Environment&) = default;

 private:
  std::vector<Element> prefix_;
  Element fallback_ = 0;
};

struct SymbolKey {
  Id name;
  std::size_t arity = 0;

  friend auto operator<=>(const SymbolKey&, const SymbolKey&) = default;
};

// Universe {0, ..., size-1}. Tables are indexed by the argument tuple read
// as a base-`size` number, first argument most significant.
class Model {
 public:
  explicit Model(std::size_t size);

  std::size_t size() const { return size_; }

  void set_function(const Id& name, std::size_t arity, std::vector<Element> table);
  void set_predicate(const Id& name, std::size_t arity, std::vector<bool> table);

  // Throws Error("MissingSymbol") when the symbol/arity pair is absent.
  Element function(const Id& name, const std::vector<Element>& args) const;
  bool predicate(const Id& name, const std::vector<Element>& args) const;

  const std::map<SymbolKey, std::vector<Element>>& functions() const { return functions_; }
  const std::map<SymbolKey, std::vector<bool>>& predicates() const { return predicates_; }

  std::size_t table_size(std::size_t arity) const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  std::size_t index_of(const std::vector<Element>& args) const;

  std::size_t size_;
  std::map<SymbolKey, std::vector<Element>> functions_;
  std::map<SymbolKey, std::vector<bool>> predicates_;
};

Element eval_term(const Environment& e, const Model& m, const Term& t);
bool eval_formula(const Environment& e, const Model& m, const Formula& f);

inline Environment extend(const Environment& e, Element d) { return e.extend(d); }

// Uniformly random interpretation of `sig` over a universe of `size`.
Model random_model(const Signature& sig, std::size_t size, std::mt19937_64& rng);

struct CountermodelOptions {
  std::size_t min_size = 1;
  std::size_t max_size = 3;
  // Interpretations tried per universe size; above this the space is
  // sampled rather than enumerated.
  std::uint64_t budget = 100'000;
  std::uint64_t seed = 0x5eed;
};

struct Countermodel {
  Model model;
  Environment env;
  bool sampled = false;
};

enum class SearchStatus { Found, NotFound, BudgetExhausted };

struct CountermodelResult {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<Countermodel> countermodel;
  std::uint64_t interpretations = 0;
  std::uint64_t seed = 0;
};

// Enumerates sizes min..max; per size predicate tables vary slowest, then
// function tables, then the free-variable environment. Spaces larger than
// the budget are sampled with an RNG seeded from `seed` and the size.
CountermodelResult find_countermodel(const Formula& f, const CountermodelOptions& options = {});

}  // namespace natded
