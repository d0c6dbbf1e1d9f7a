// Countermodel search over small finite universes. The formula is compiled
// against a flat digit vector holding every table entry, so each candidate
// interpretation is one odometer step.

#include <limits>

#include "natded/semantics.hpp"

namespace natded {
namespace {

struct Slot {
  Id name;
  std::size_t arity;
  std::size_t offset;  // into the digit vector
};

struct CTerm {
  bool is_var = false;
  std::size_t index = 0;  // de Bruijn index or function slot
  std::vector<CTerm> args;
};

struct CFormula {
  Formula::Kind kind = Formula::Kind::Falsity;
  std::size_t slot = 0;
  std::vector<CTerm> args;
  std::vector<CFormula> parts;
};

class Compiled {
 public:
  Compiled(const Formula& f, std::size_t size) : size_(size) {
    Signature sig = signature_of(f);
    free_vars_ = free_bound(f);
    std::size_t offset = 0;
    for (const auto& [name, arity] : sig.predicates) {
      preds_.push_back({name, arity, offset});
      offset += power(arity);
    }
    pred_digits_ = offset;
    for (const auto& [name, arity] : sig.functions) {
      funcs_.push_back({name, arity, offset});
      offset += power(arity);
    }
    env_offset_ = offset;
    digits_ = offset + free_vars_;
    root_ = compile(f);
  }

  std::size_t digits() const { return digits_; }
  std::size_t base(std::size_t digit) const { return digit < pred_digits_ ? 2 : size_; }

  // Number of interpretations, saturating at uint64 max.
  std::uint64_t space() const {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < digits_; ++i) {
      std::uint64_t b = base(i);
      if (total > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
      total *= b;
    }
    return total;
  }

  bool eval(const std::vector<std::uint32_t>& digits) const {
    stack_.clear();
    return eval(root_, digits);
  }

  Countermodel decode(const std::vector<std::uint32_t>& digits, bool sampled) const {
    Model m(size_);
    for (const auto& s : funcs_) {
      std::vector<Element> table(power(s.arity));
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = digits[s.offset + i];
      m.set_function(s.name, s.arity, std::move(table));
    }
    for (const auto& s : preds_) {
      std::vector<bool> table(power(s.arity));
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = digits[s.offset + i] != 0;
      m.set_predicate(s.name, s.arity, std::move(table));
    }
    std::vector<Element> env(free_vars_);
    for (std::size_t i = 0; i < free_vars_; ++i) env[i] = digits[env_offset_ + i];
    return Countermodel{std::move(m), Environment(std::move(env)), sampled};
  }

 private:
  std::size_t power(std::size_t arity) const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < arity; ++i) n *= size_;
    return n;
  }

  static std::size_t find(const std::vector<Slot>& slots, const Id& name) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].name == name) return i;
    }
    throw Error("MissingSymbol", "symbol '" + name + "' not in signature");
  }

  CTerm compile(const Term& t) const {
    CTerm c;
    if (t.is_var()) {
      c.is_var = true;
      c.index = t.index();
      return c;
    }
    c.index = find(funcs_, t.name());
    for (const auto& a : t.args()) c.args.push_back(compile(a));
    return c;
  }

  CFormula compile(const Formula& f) const {
    CFormula c;
    c.kind = f.kind();
    switch (f.kind()) {
      case Formula::Kind::Falsity:
        break;
      case Formula::Kind::Pre:
        c.slot = find(preds_, f.name());
        for (const auto& a : f.args()) c.args.push_back(compile(a));
        break;
      case Formula::Kind::Exi:
      case Formula::Kind::Uni:
        c.parts.push_back(compile(f.body()));
        break;
      default:
        c.parts.push_back(compile(f.lhs()));
        c.parts.push_back(compile(f.rhs()));
        break;
    }
    return c;
  }

  std::size_t table_index(const std::vector<CTerm>& args, const std::vector<std::uint32_t>& digits) const {
    std::size_t idx = 0;
    for (const auto& a : args) idx = idx * size_ + eval(a, digits);
    return idx;
  }

  std::uint32_t eval(const CTerm& t, const std::vector<std::uint32_t>& digits) const {
    if (t.is_var) {
      std::size_t depth = stack_.size();
      if (t.index < depth) return stack_[depth - 1 - t.index];
      std::size_t free = t.index - depth;
      return free < free_vars_ ? digits[env_offset_ + free] : 0;
    }
    return digits[funcs_[t.index].offset + table_index(t.args, digits)];
  }

  bool eval(const CFormula& f, const std::vector<std::uint32_t>& digits) const {
    switch (f.kind) {
      case Formula::Kind::Falsity:
        return false;
      case Formula::Kind::Pre:
        return digits[preds_[f.slot].offset + table_index(f.args, digits)] != 0;
      case Formula::Kind::Imp:
        return !eval(f.parts[0], digits) || eval(f.parts[1], digits);
      case Formula::Kind::Dis:
        return eval(f.parts[0], digits) || eval(f.parts[1], digits);
      case Formula::Kind::Con:
        return eval(f.parts[0], digits) && eval(f.parts[1], digits);
      case Formula::Kind::Exi:
      case Formula::Kind::Uni: {
        bool universal = f.kind == Formula::Kind::Uni;
        for (std::uint32_t d = 0; d < size_; ++d) {
          stack_.push_back(d);
          bool v = eval(f.parts[0], digits);
          stack_.pop_back();
          if (v != universal) return v;
        }
        return universal;
      }
    }
    return false;
  }

  std::size_t size_;
  std::size_t free_vars_ = 0;
  std::vector<Slot> preds_;
  std::vector<Slot> funcs_;
  std::size_t pred_digits_ = 0;
  std::size_t env_offset_ = 0;
  std::size_t digits_ = 0;
  CFormula root_;
  mutable std::vector<std::uint32_t> stack_;
};

// Odometer step, last digit fastest. False once every digit wrapped.
bool advance(std::vector<std::uint32_t>& digits, const Compiled& c) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < c.base(i)) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace

CountermodelResult find_countermodel(const Formula& f, const CountermodelOptions& options) {
  if (options.min_size == 0 || options.max_size < options.min_size) {
    throw Error("InvalidArgument", "countermodel search needs 1 <= min_size <= max_size");
  }
  require_well_formed(f);
  CountermodelResult result;
  result.seed = options.seed;
  bool sampled_any = false;
  for (std::size_t size = options.min_size; size <= options.max_size; ++size) {
    Compiled c(f, size);
    std::vector<std::uint32_t> digits(c.digits(), 0);
    if (c.space() <= options.budget) {
      do {
        ++result.interpretations;
        if (!c.eval(digits)) {
          result.status = SearchStatus::Found;
          result.countermodel = c.decode(digits, false);
          return result;
        }
      } while (advance(digits, c));
      continue;
    }
    sampled_any = true;
    std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * size));
    for (std::uint64_t n = 0; n < options.budget; ++n) {
      for (std::size_t i = 0; i < digits.size(); ++i) {
        digits[i] = static_cast<std::uint32_t>(rng() % c.base(i));
      }
      ++result.interpretations;
      if (!c.eval(digits)) {
        result.status = SearchStatus::Found;
        result.countermodel = c.decode(digits, true);
        return result;
      }
    }
  }
  result.status = sampled_any ? SearchStatus::BudgetExhausted : SearchStatus::NotFound;
  return result;
}

}  // namespace natded
