#include "natded/engine.hpp"

namespace natded {

namespace {

Term rename_term(const Term& t, const Id& from, const Id& to) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_term(a, from, to));
  return Term::fun(t.name() == from && t.args().empty() ? to : t.name(), std::move(args));
}

Formula rename_formula(const Formula& f, const Id& from, const Id& to) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Falsity:
      return f;
    case K::Pre: {
      std::vector<Term> args;
      for (const auto& a : f.args()) args.push_back(rename_term(a, from, to));
      return Formula::pre(f.name(), std::move(args));
    }
    case K::Imp:
      return Formula::imp(rename_formula(f.lhs(), from, to), rename_formula(f.rhs(), from, to));
    case K::Dis:
      return Formula::dis(rename_formula(f.lhs(), from, to), rename_formula(f.rhs(), from, to));
    case K::Con:
      return Formula::con(rename_formula(f.lhs(), from, to), rename_formula(f.rhs(), from, to));
    case K::Exi:
      return Formula::exi(rename_formula(f.body(), from, to));
    case K::Uni:
      return Formula::uni(rename_formula(f.body(), from, to));
  }
  return f;
}

void rename_derivation(Derivation& d, const Id& from, const Id& to) {
  d.goal = rename_formula(d.goal, from, to);
  for (auto& a : d.assumptions) a = rename_formula(a, from, to);
  if (d.witness) d.witness = rename_term(*d.witness, from, to);
  for (auto& p : d.premises) rename_derivation(p, from, to);
}

bool occurs_in(const Derivation& d, const Id& c) {
  if (!new_formula(c, d.goal) || !news(c, d.assumptions)) return true;
  if (d.witness && !new_term(c, *d.witness)) return true;
  for (const auto& p : d.premises) {
    if (occurs_in(p, c)) return true;
  }
  return false;
}

std::optional<Formula> auxiliary(const Derivation& d) {
  switch (d.rule) {
    case Rule::Imp_E:
      return d.premises.at(1).goal;
    case Rule::Dis_E:
    case Rule::Exi_E:
    case Rule::Uni_E:
      return d.premises.at(0).goal;
    case Rule::Con_E1:
      return d.premises.at(0).goal.is(Formula::Kind::Con) ? std::optional(d.premises[0].goal.rhs()) : std::nullopt;
    case Rule::Con_E2:
      return d.premises.at(0).goal.is(Formula::Kind::Con) ? std::optional(d.premises[0].goal.lhs()) : std::nullopt;
    default:
      return std::nullopt;
  }
}

void replay_node(ProofState& state, NodeId id, Derivation d) {
  const Node& n = state.node(id);
  if (n.goal != d.goal || n.assumptions != d.assumptions) {
    throw RuleError("RuleMismatch", "replayed subgoal differs from the derivation");
  }
  if (!n.open()) return;

  RuleRequest req;
  req.node = id;
  req.rule = d.rule;
  req.formula = auxiliary(d);
  ApplyOptions options;
  if (d.rule == Rule::Exi_I || d.rule == Rule::Uni_E) req.witness = d.witness;
  if (rule_introduces_constant(d.rule)) {
    if (!d.witness || !d.witness->is_constant()) throw RuleError("MissingWitness", "missing fresh constant");
    Id c = d.witness->name();
    if (!state.is_fresh(c)) {
      Id renamed = c;
      do {
        renamed += "'";
      } while (!state.is_fresh(renamed) || occurs_in(d, renamed));
      // Only the premises mention the constant; the node itself does not.
      for (auto& p : d.premises) rename_derivation(p, c, renamed);
      d.witness = Term::fun(renamed);
      c = renamed;
    }
    options.constant = c;
  }
  state.apply_rule(req, options);
  const std::vector<NodeId> children = state.node(id).children;
  if (children.size() != d.premises.size()) throw RuleError("RuleMismatch", "premise count differs");
  for (std::size_t i = 0; i < children.size(); ++i) replay_node(state, children[i], std::move(d.premises[i]));
}

}  // namespace

ProofState replay(const Derivation& d) {
  if (!d.assumptions.empty()) throw RuleError("RuleMismatch", "the root of a session has no assumptions");
  ProofState state = ProofState::new_session(d.goal);
  replay_node(state, 0, d);
  return state;
}

}  // namespace natded
