#include "natded/engine.hpp"

#include <algorithm>
#include <functional>

namespace natded {

namespace {

std::vector<Formula> cons(const Formula& head, const std::vector<Formula>& tail) {
  std::vector<Formula> out;
  out.reserve(tail.size() + 1);
  out.push_back(head);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

Term lift(const Term& t, std::size_t times) {
  Term out = t;
  for (std::size_t k = 0; k < times; ++k) out = inc_term(out);
  return out;
}

// Inverse of sub(0, t, .) that abstracts every occurrence of t.
Term abstract_term(const Term& u, const Term& t, std::size_t depth) {
  if (u == lift(t, depth)) return Term::var(depth);
  if (u.is_var()) return u.index() >= depth ? Term::var(u.index() + 1) : u;
  std::vector<Term> args;
  for (const auto& a : u.args()) args.push_back(abstract_term(a, t, depth));
  return Term::fun(u.name(), std::move(args));
}

Formula abstract(const Formula& f, const Term& t, std::size_t depth) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return f;
    case Formula::Kind::Pre: {
      std::vector<Term> args;
      for (const auto& a : f.args()) args.push_back(abstract_term(a, t, depth));
      return Formula::pre(f.name(), std::move(args));
    }
    case Formula::Kind::Imp:
      return Formula::imp(abstract(f.lhs(), t, depth), abstract(f.rhs(), t, depth));
    case Formula::Kind::Dis:
      return Formula::dis(abstract(f.lhs(), t, depth), abstract(f.rhs(), t, depth));
    case Formula::Kind::Con:
      return Formula::con(abstract(f.lhs(), t, depth), abstract(f.rhs(), t, depth));
    case Formula::Kind::Exi:
      return Formula::exi(abstract(f.body(), t, depth + 1));
    case Formula::Kind::Uni:
      return Formula::uni(abstract(f.body(), t, depth + 1));
  }
  return f;
}

std::string primes(std::size_t n) { return std::string(n, '\''); }

std::string describe_scope(const Id& c, const std::vector<Formula>& scope) {
  std::string text = c + " is new: it does not occur in ";
  if (scope.empty()) return text + "any formula";
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (i) text += ", ";
    text += render_formula(scope[i], PrintStyle::Named);
  }
  return text;
}

template <class Pred>
std::optional<Formula> first_assumption(const std::vector<Formula>& z, Pred pred) {
  auto it = std::find_if(z.begin(), z.end(), pred);
  if (it == z.end()) return std::nullopt;
  return *it;
}

struct Expansion {
  Applied applied;
  std::vector<std::pair<Formula, std::vector<Formula>>> children;
};

[[noreturn]] void mismatch(const std::string& why) { throw RuleError("RuleMismatch", why); }

}  // namespace

ProofState ProofState::new_session(const Formula& goal) {
  require_well_formed(goal);
  if (!is_closed(goal)) throw RuleError("OpenFormula", "the goal has free variables");
  ProofState s;
  Node root;
  root.id = 0;
  root.goal = goal;
  s.nodes_.push_back(std::move(root));
  return s;
}

const Node& ProofState::node(NodeId id) const {
  if (id >= nodes_.size()) throw RuleError("UnknownNode", "no node " + std::to_string(id));
  return nodes_[id];
}

bool ProofState::is_fresh(const Id& c) const {
  Signature root = signature_of(root_goal());
  if (root.functions.count(c) || root.predicates.count(c)) return false;
  for (const auto& n : nodes_) {
    if (!new_formula(c, n.goal) || !news(c, n.assumptions)) return false;
  }
  return true;
}

Id ProofState::fresh_constant() const {
  for (std::size_t k = 1;; ++k) {
    Id candidate = "c" + primes(k);
    if (is_fresh(candidate)) return candidate;
  }
}

NodeId ProofState::add_child(NodeId parent, Formula goal, std::vector<Formula> assumptions) {
  Node child;
  child.id = nodes_.size();
  child.goal = std::move(goal);
  child.assumptions = std::move(assumptions);
  child.parent = parent;
  nodes_.push_back(std::move(child));
  nodes_[parent].children.push_back(nodes_.back().id);
  return nodes_.back().id;
}

void ProofState::apply_rule(const RuleRequest& request, const ApplyOptions& options) {
  const Node& target = node(request.node);
  if (!target.open()) throw RuleError("NodeClosed", "line is already proved");

  const Rule rule = request.rule;
  const bool wants_witness = rule == Rule::Exi_I || rule == Rule::Uni_E;
  if (wants_witness && !request.witness) throw RuleError("MissingWitness", std::string(rule_name(rule)) + " needs a witness term");
  if (!wants_witness && request.witness) throw RuleError("UnexpectedWitness", std::string(rule_name(rule)) + " takes no witness");
  const bool takes_formula = rule == Rule::Imp_E || rule == Rule::Dis_E || rule == Rule::Con_E1 ||
                             rule == Rule::Con_E2 || rule == Rule::Exi_E || rule == Rule::Uni_E;
  if (!takes_formula && request.formula) {
    throw RuleError("UnexpectedFormula", std::string(rule_name(rule)) + " takes no auxiliary formula");
  }
  if (options.constant && !rule_introduces_constant(rule)) {
    throw RuleError("UnexpectedWitness", std::string(rule_name(rule)) + " introduces no constant");
  }
  if (request.witness) {
    Signature sig;
    if (auto clash = collect_signature(*request.witness, sig)) {
      throw RuleError("IllFormed", "symbol '" + *clash + "' used with more than one arity");
    }
  }
  if (request.formula) {
    try {
      require_well_formed(*request.formula);
    } catch (const Error& e) {
      throw RuleError("IllFormed", e.what());
    }
  }

  const Formula& p = target.goal;
  const auto& z = target.assumptions;
  auto choose_constant = [&]() -> Id {
    if (!options.constant) return fresh_constant();
    if (!is_valid_id(*options.constant) || !is_fresh(*options.constant)) {
      throw RuleError("NotFresh", "constant " + *options.constant + " is not new in the proof");
    }
    return *options.constant;
  };

  Expansion ex;
  ex.applied.rule = rule;
  switch (rule) {
    case Rule::Assume:
      if (!member(p, z)) mismatch("the goal is not among the assumptions");
      break;
    case Rule::Boole:
      ex.children.push_back({Formula::falsity(), cons(Formula::neg(p), z)});
      break;
    case Rule::Imp_E: {
      auto q = request.formula;
      if (!q) {
        auto hit = first_assumption(z, [&](const Formula& a) { return a.is(Formula::Kind::Imp) && a.rhs() == p; });
        if (!hit) throw RuleError("MissingFormula", "Imp_E needs the antecedent formula");
        q = hit->lhs();
      }
      ex.children.push_back({Formula::imp(*q, p), z});
      ex.children.push_back({*q, z});
      break;
    }
    case Rule::Imp_I:
      if (!p.is(Formula::Kind::Imp)) mismatch("Imp_I needs an implication");
      ex.children.push_back({p.rhs(), cons(p.lhs(), z)});
      break;
    case Rule::Dis_E: {
      auto d = request.formula;
      if (!d) {
        d = first_assumption(z, [](const Formula& a) { return a.is(Formula::Kind::Dis); });
        if (!d) throw RuleError("MissingFormula", "Dis_E needs a disjunction");
      }
      if (!d->is(Formula::Kind::Dis)) mismatch("Dis_E needs a disjunction to eliminate");
      ex.children.push_back({*d, z});
      ex.children.push_back({p, cons(d->lhs(), z)});
      ex.children.push_back({p, cons(d->rhs(), z)});
      break;
    }
    case Rule::Dis_I1:
    case Rule::Dis_I2:
      if (!p.is(Formula::Kind::Dis)) mismatch(std::string(rule_name(rule)) + " needs a disjunction");
      ex.children.push_back({rule == Rule::Dis_I1 ? p.lhs() : p.rhs(), z});
      break;
    case Rule::Con_E1: {
      auto other = request.formula;
      if (!other) {
        auto hit = first_assumption(z, [&](const Formula& a) { return a.is(Formula::Kind::Con) && a.lhs() == p; });
        if (!hit) throw RuleError("MissingFormula", "Con_E1 needs the right conjunct");
        other = hit->rhs();
      }
      ex.children.push_back({Formula::con(p, *other), z});
      break;
    }
    case Rule::Con_E2: {
      auto other = request.formula;
      if (!other) {
        auto hit = first_assumption(z, [&](const Formula& a) { return a.is(Formula::Kind::Con) && a.rhs() == p; });
        if (!hit) throw RuleError("MissingFormula", "Con_E2 needs the left conjunct");
        other = hit->lhs();
      }
      ex.children.push_back({Formula::con(*other, p), z});
      break;
    }
    case Rule::Con_I:
      if (!p.is(Formula::Kind::Con)) mismatch("Con_I needs a conjunction");
      ex.children.push_back({p.lhs(), z});
      ex.children.push_back({p.rhs(), z});
      break;
    case Rule::Exi_E: {
      auto e = request.formula;
      if (!e) {
        e = first_assumption(z, [](const Formula& a) { return a.is(Formula::Kind::Exi); });
        if (!e) throw RuleError("MissingFormula", "Exi_E needs an existential");
      }
      if (!e->is(Formula::Kind::Exi)) mismatch("Exi_E needs an existential to eliminate");
      Id c = choose_constant();
      Term witness = Term::fun(c);
      std::vector<Formula> scope = cons(e->body(), cons(p, z));
      ex.applied.witness = witness;
      ex.applied.side_condition = SideCondition{c, scope, describe_scope(c, scope)};
      ex.children.push_back({*e, z});
      ex.children.push_back({p, cons(sub(0, witness, e->body()), z)});
      break;
    }
    case Rule::Exi_I:
      if (!p.is(Formula::Kind::Exi)) mismatch("Exi_I needs an existential");
      ex.applied.witness = request.witness;
      ex.children.push_back({sub(0, *request.witness, p.body()), z});
      break;
    case Rule::Uni_E: {
      const Term& t = *request.witness;
      std::optional<Formula> major = request.formula;
      if (major) {
        if (!major->is(Formula::Kind::Uni) || sub(0, t, major->body()) != p) {
          mismatch("the goal is not an instance of the given universal at the witness");
        }
      } else {
        major = first_assumption(z, [&](const Formula& a) {
          return a.is(Formula::Kind::Uni) && sub(0, t, a.body()) == p;
        });
        if (!major) major = Formula::uni(abstract(p, t, 0));
        if (sub(0, t, major->body()) != p) mismatch("cannot abstract the witness from the goal");
      }
      ex.applied.witness = t;
      ex.children.push_back({*major, z});
      break;
    }
    case Rule::Uni_I: {
      if (!p.is(Formula::Kind::Uni)) mismatch("Uni_I needs a universal");
      Id c = choose_constant();
      Term witness = Term::fun(c);
      std::vector<Formula> scope = cons(p.body(), z);
      ex.applied.witness = witness;
      ex.applied.side_condition = SideCondition{c, scope, describe_scope(c, scope)};
      ex.children.push_back({sub(0, witness, p.body()), z});
      break;
    }
  }

  for (const auto& [goal, assumptions] : ex.children) {
    if (!is_well_formed(goal)) throw RuleError("IllFormed", "the new subgoal mixes arities of a symbol");
  }

  const NodeId id = request.node;
  history_.push_back(Edit{id, nodes_.size()});
  nodes_[id].applied = std::move(ex.applied);
  for (auto& [goal, assumptions] : ex.children) {
    NodeId child = add_child(id, std::move(goal), std::move(assumptions));
    Node& n = nodes_[child];
    if (member(n.goal, n.assumptions)) n.applied = Applied{Rule::Assume, std::nullopt, std::nullopt, true};
  }
}

void ProofState::undo() {
  if (history_.empty()) throw RuleError("NothingToUndo", "nothing to undo");
  Edit last = history_.back();
  history_.pop_back();
  nodes_.resize(last.nodes_before);
  nodes_[last.target].applied.reset();
  nodes_[last.target].children.clear();
}

bool ProofState::is_complete() const {
  return std::none_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.open(); });
}

Derivation ProofState::extract_from(NodeId id) const {
  const Node& n = nodes_[id];
  Derivation d;
  d.rule = n.applied->rule;
  d.goal = n.goal;
  d.assumptions = n.assumptions;
  d.witness = n.applied->witness;
  for (NodeId c : n.children) d.premises.push_back(extract_from(c));
  return d;
}

Derivation ProofState::extract() const {
  if (!is_complete()) throw RuleError("Incomplete", "the proof still has open goals");
  return extract_from(0);
}

std::vector<Line> ProofState::lines() const {
  std::vector<Line> out;
  std::function<void(NodeId, std::size_t)> walk = [&](NodeId id, std::size_t depth) {
    out.push_back(Line{out.size() + 1, depth, id});
    for (NodeId c : nodes_[id].children) walk(c, depth + 1);
  };
  walk(0, 0);
  return out;
}

std::vector<NodeId> ProofState::open_leaves() const {
  std::vector<NodeId> out;
  for (const auto& line : lines()) {
    if (nodes_[line.node].open()) out.push_back(line.node);
  }
  return out;
}

namespace {

// Parallel traversal; `depth` is the number of binders crossed, which is
// also the index the substituted variable has at this point.
class WitnessMatcher {
 public:
  bool formula(const Formula& body, const Formula& inst, std::size_t depth) {
    if (body.kind() != inst.kind()) return fail("formula shapes differ");
    switch (body.kind()) {
      case Formula::Kind::Falsity:
        return true;
      case Formula::Kind::Pre:
        if (body.name() != inst.name() || body.args().size() != inst.args().size()) {
          return fail("predicates differ");
        }
        for (std::size_t k = 0; k < body.args().size(); ++k) {
          if (!term(body.args()[k], inst.args()[k], depth)) return false;
        }
        return true;
      case Formula::Kind::Exi:
      case Formula::Kind::Uni:
        return formula(body.body(), inst.body(), depth + 1);
      default:
        return formula(body.lhs(), inst.lhs(), depth) && formula(body.rhs(), inst.rhs(), depth);
    }
  }

  std::optional<Term> candidate;
  std::string reason;

 private:
  bool fail(std::string why) {
    reason = std::move(why);
    return false;
  }

  bool term(const Term& body, const Term& inst, std::size_t depth) {
    if (body.is_var()) {
      if (body.index() < depth) {
        if (inst != body) return fail("bound variable mismatch");
        return true;
      }
      if (body.index() > depth) {
        if (inst != Term::var(body.index() - 1)) return fail("free variable mismatch");
        return true;
      }
      auto unshifted = unshift(inst, depth);
      if (!unshifted) return fail("candidate witness would be captured by a quantifier");
      if (candidate && *candidate != *unshifted) return fail("conflicting witness candidates");
      candidate = std::move(unshifted);
      return true;
    }
    if (inst.is_var() || body.name() != inst.name() || body.args().size() != inst.args().size()) {
      return fail("function symbols differ");
    }
    for (std::size_t k = 0; k < body.args().size(); ++k) {
      if (!term(body.args()[k], inst.args()[k], depth)) return false;
    }
    return true;
  }

  // Undo `depth` applications of inc_term.
  static std::optional<Term> unshift(const Term& t, std::size_t depth) {
    if (t.is_var()) {
      if (t.index() < depth) return std::nullopt;
      return Term::var(t.index() - depth);
    }
    std::vector<Term> args;
    for (const auto& a : t.args()) {
      auto u = unshift(a, depth);
      if (!u) return std::nullopt;
      args.push_back(std::move(*u));
    }
    return Term::fun(t.name(), std::move(args));
  }
};

}  // namespace

WitnessMatch infer_witness(const Formula& body, const Formula& instance) {
  WitnessMatcher m;
  if (!m.formula(body, instance, 0)) return NoMatch{m.reason};
  if (!m.candidate) {
    if (sub(0, Term::fun("a"), body) != instance) return NoMatch{"formulas differ"};
    return AnyTerm{};
  }
  if (sub(0, *m.candidate, body) != instance) return NoMatch{"candidate does not reproduce the instance"};
  return *m.candidate;
}

Term default_witness(const Signature& avoid) {
  auto usable = [&](const Id& name) {
    auto it = avoid.functions.find(name);
    return it == avoid.functions.end() || it->second == 0;
  };
  if (usable("a")) return Term::fun("a");
  for (std::size_t k = 1;; ++k) {
    Id name = "a" + std::to_string(k);
    if (usable(name)) return Term::fun(name);
  }
}

}  // namespace natded
