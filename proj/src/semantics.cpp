#include "natded/semantics.hpp"

namespace natded {

Environment Environment::extend(Element d) const {
  std::vector<Element> prefix;
  prefix.reserve(prefix_.size() + 1);
  prefix.push_back(d);
  prefix.insert(prefix.end(), prefix_.begin(), prefix_.end());
  return Environment(std::move(prefix), fallback_);
}

Model::Model(std::size_t size) : size_(size) {
  if (size == 0) throw Error("InvalidModel", "universe size must be at least 1");
}

std::size_t Model::table_size(std::size_t arity) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) n *= size_;
  return n;
}

void Model::set_function(const Id& name, std::size_t arity, std::vector<Element> table) {
  if (table.size() != table_size(arity)) throw Error("InvalidModel", "function table for '" + name + "' is not total");
  for (Element v : table) {
    if (v >= size_) throw Error("InvalidModel", "function table for '" + name + "' leaves the universe");
  }
  functions_[SymbolKey{name, arity}] = std::move(table);
}

void Model::set_predicate(const Id& name, std::size_t arity, std::vector<bool> table) {
  if (table.size() != table_size(arity)) throw Error("InvalidModel", "predicate table for '" + name + "' is not total");
  predicates_[SymbolKey{name, arity}] = std::move(table);
}

std::size_t Model::index_of(const std::vector<Element>& args) const {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * size_ + a;
  return idx;
}

Element Model::function(const Id& name, const std::vector<Element>& args) const {
  auto it = functions_.find(SymbolKey{name, args.size()});
  if (it == functions_.end()) {
    throw Error("MissingSymbol", "model has no function " + name + "/" + std::to_string(args.size()));
  }
  return it->second[index_of(args)];
}

bool Model::predicate(const Id& name, const std::vector<Element>& args) const {
  auto it = predicates_.find(SymbolKey{name, args.size()});
  if (it == predicates_.end()) {
    throw Error("MissingSymbol", "model has no predicate " + name + "/" + std::to_string(args.size()));
  }
  return it->second[index_of(args)];
}

Element eval_term(const Environment& e, const Model& m, const Term& t) {
  if (t.is_var()) return e(t.index());
  std::vector<Element> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(eval_term(e, m, a));
  return m.function(t.name(), args);
}

bool eval_formula(const Environment& e, const Model& m, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return false;
    case Formula::Kind::Pre: {
      std::vector<Element> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) args.push_back(eval_term(e, m, a));
      return m.predicate(f.name(), args);
    }
    case Formula::Kind::Imp:
      return !eval_formula(e, m, f.lhs()) || eval_formula(e, m, f.rhs());
    case Formula::Kind::Dis:
      return eval_formula(e, m, f.lhs()) || eval_formula(e, m, f.rhs());
    case Formula::Kind::Con:
      return eval_formula(e, m, f.lhs()) && eval_formula(e, m, f.rhs());
    case Formula::Kind::Exi:
      for (Element d = 0; d < m.size(); ++d) {
        if (eval_formula(e.extend(d), m, f.body())) return true;
      }
      return false;
    case Formula::Kind::Uni:
      for (Element d = 0; d < m.size(); ++d) {
        if (!eval_formula(e.extend(d), m, f.body())) return false;
      }
      return true;
  }
  return false;
}

Model random_model(const Signature& sig, std::size_t size, std::mt19937_64& rng) {
  Model m(size);
  std::uniform_int_distribution<Element> element(0, size - 1);
  std::bernoulli_distribution coin(0.5);
  for (const auto& [name, arity] : sig.functions) {
    std::vector<Element> table(m.table_size(arity));
    for (auto& v : table) v = element(rng);
    m.set_function(name, arity, std::move(table));
  }
  for (const auto& [name, arity] : sig.predicates) {
    std::vector<bool> table(m.table_size(arity));
    for (std::size_t i = 0; i < table.size(); ++i) table[i] = coin(rng);
    m.set_predicate(name, arity, std::move(table));
  }
  return m;
}

}  // namespace natded
