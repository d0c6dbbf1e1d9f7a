#include "natded/kernel.hpp"

#include <algorithm>

namespace natded {

namespace {

constexpr std::array<std::string_view, 14> kRuleNames{
    "Assume", "Boole", "Imp_E", "Imp_I", "Dis_E", "Dis_I1", "Dis_I2",
    "Con_E1", "Con_E2", "Con_I", "Exi_E", "Exi_I", "Uni_E", "Uni_I",
};

}  // namespace

std::string_view rule_name(Rule r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule r : kAllRules) {
    if (rule_name(r) == name) return r;
  }
  return std::nullopt;
}

std::size_t rule_arity(Rule r) {
  switch (r) {
    case Rule::Assume:
      return 0;
    case Rule::Imp_E:
    case Rule::Con_I:
    case Rule::Exi_E:
      return 2;
    case Rule::Dis_E:
      return 3;
    default:
      return 1;
  }
}

bool rule_has_witness(Rule r) {
  return r == Rule::Exi_E || r == Rule::Exi_I || r == Rule::Uni_E || r == Rule::Uni_I;
}

bool rule_introduces_constant(Rule r) { return r == Rule::Exi_E || r == Rule::Uni_I; }

bool member(const Formula& p, const std::vector<Formula>& z) {
  return std::find(z.begin(), z.end(), p) != z.end();
}

bool new_term(const Id& c, const Term& t) {
  if (t.is_var()) return true;
  return t.name() != c && new_list(c, t.args());
}

bool new_list(const Id& c, const std::vector<Term>& ts) {
  return std::all_of(ts.begin(), ts.end(), [&](const Term& t) { return new_term(c, t); });
}

bool new_formula(const Id& c, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return true;
    case Formula::Kind::Pre:
      return new_list(c, f.args());
    case Formula::Kind::Exi:
    case Formula::Kind::Uni:
      return new_formula(c, f.body());
    default:
      return new_formula(c, f.lhs()) && new_formula(c, f.rhs());
  }
}

bool news(const Id& c, const std::vector<Formula>& z) {
  return std::all_of(z.begin(), z.end(), [&](const Formula& f) { return new_formula(c, f); });
}

Term inc_term(const Term& t) {
  if (t.is_var()) return Term::var(t.index() + 1);
  return Term::fun(t.name(), inc_list(t.args()));
}

std::vector<Term> inc_list(const std::vector<Term>& ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(inc_term(t));
  return out;
}

Term sub_term(std::size_t i, const Term& s, const Term& t) {
  if (t.is_var()) {
    if (t.index() < i) return t;
    if (t.index() == i) return s;
    return Term::var(t.index() - 1);
  }
  return Term::fun(t.name(), sub_list(i, s, t.args()));
}

std::vector<Term> sub_list(std::size_t i, const Term& s, const std::vector<Term>& ts) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(sub_term(i, s, t));
  return out;
}

Formula sub(std::size_t i, const Term& s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      return f;
    case Formula::Kind::Pre:
      return Formula::pre(f.name(), sub_list(i, s, f.args()));
    case Formula::Kind::Imp:
      return Formula::imp(sub(i, s, f.lhs()), sub(i, s, f.rhs()));
    case Formula::Kind::Dis:
      return Formula::dis(sub(i, s, f.lhs()), sub(i, s, f.rhs()));
    case Formula::Kind::Con:
      return Formula::con(sub(i, s, f.lhs()), sub(i, s, f.rhs()));
    case Formula::Kind::Exi:
      return Formula::exi(sub(i + 1, inc_term(s), f.body()));
    case Formula::Kind::Uni:
      return Formula::uni(sub(i + 1, inc_term(s), f.body()));
  }
  return f;
}

namespace {

std::vector<Formula> cons(const Formula& head, const std::vector<Formula>& tail) {
  std::vector<Formula> out;
  out.reserve(tail.size() + 1);
  out.push_back(head);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

class Checker {
 public:
  std::optional<CheckFailure> run(const Derivation& d) {
    if (auto f = node(d)) return f;
    for (std::size_t k = 0; k < d.premises.size(); ++k) {
      path_.push_back(k);
      if (auto f = run(d.premises[k])) return f;
      path_.pop_back();
    }
    return std::nullopt;
  }

 private:
  CheckFailure fail(CheckFailureKind kind, std::string reason) const {
    return CheckFailure{path_, kind, std::move(reason)};
  }

  std::optional<CheckFailure> violation(std::string reason) const {
    return fail(CheckFailureKind::RuleViolation, std::move(reason));
  }

  // Premise k must prove `goal` under `assumptions`.
  std::optional<CheckFailure> premise(const Derivation& d, std::size_t k, const Formula& goal,
                                      const std::vector<Formula>& assumptions) const {
    const Derivation& p = d.premises[k];
    if (p.goal != goal) {
      return violation("premise " + std::to_string(k + 1) + " proves " +
                       render_formula(p.goal, PrintStyle::DeepEmbed) + " instead of " +
                       render_formula(goal, PrintStyle::DeepEmbed));
    }
    if (p.assumptions != assumptions) {
      return violation("premise " + std::to_string(k + 1) + " has the wrong assumption list");
    }
    return std::nullopt;
  }

  std::optional<CheckFailure> structure(const Derivation& d) const {
    if (d.premises.size() != rule_arity(d.rule)) {
      return fail(CheckFailureKind::Malformed, std::string(rule_name(d.rule)) + " needs " +
                                                   std::to_string(rule_arity(d.rule)) + " premises, got " +
                                                   std::to_string(d.premises.size()));
    }
    if (rule_has_witness(d.rule) != d.witness.has_value()) {
      return fail(CheckFailureKind::Malformed, d.witness ? "unexpected witness" : "missing witness");
    }
    if (rule_introduces_constant(d.rule) && !d.witness->is_constant()) {
      return fail(CheckFailureKind::Malformed, "witness must be a constant");
    }
    return std::nullopt;
  }

  std::optional<CheckFailure> node(const Derivation& d) const {
    if (auto f = structure(d)) return f;
    const Formula& p = d.goal;
    const auto& z = d.assumptions;
    switch (d.rule) {
      case Rule::Assume:
        if (!member(p, z)) return violation("goal is not among the assumptions");
        return std::nullopt;
      case Rule::Boole:
        return premise(d, 0, Formula::falsity(), cons(Formula::neg(p), z));
      case Rule::Imp_E: {
        const Formula& major = d.premises[0].goal;
        if (!major.is(Formula::Kind::Imp) || major.rhs() != p) {
          return violation("premise 1 must prove an implication whose conclusion is the goal");
        }
        if (auto f = premise(d, 0, major, z)) return f;
        return premise(d, 1, major.lhs(), z);
      }
      case Rule::Imp_I:
        if (!p.is(Formula::Kind::Imp)) return violation("goal is not an implication");
        return premise(d, 0, p.rhs(), cons(p.lhs(), z));
      case Rule::Dis_E: {
        const Formula& major = d.premises[0].goal;
        if (!major.is(Formula::Kind::Dis)) return violation("premise 1 must prove a disjunction");
        if (auto f = premise(d, 0, major, z)) return f;
        if (auto f = premise(d, 1, p, cons(major.lhs(), z))) return f;
        return premise(d, 2, p, cons(major.rhs(), z));
      }
      case Rule::Dis_I1:
      case Rule::Dis_I2:
        if (!p.is(Formula::Kind::Dis)) return violation("goal is not a disjunction");
        return premise(d, 0, d.rule == Rule::Dis_I1 ? p.lhs() : p.rhs(), z);
      case Rule::Con_E1:
      case Rule::Con_E2: {
        const Formula& major = d.premises[0].goal;
        if (!major.is(Formula::Kind::Con) || (d.rule == Rule::Con_E1 ? major.lhs() : major.rhs()) != p) {
          return violation("premise must prove a conjunction with the goal as its " +
                           std::string(d.rule == Rule::Con_E1 ? "left" : "right") + " part");
        }
        return premise(d, 0, major, z);
      }
      case Rule::Con_I:
        if (!p.is(Formula::Kind::Con)) return violation("goal is not a conjunction");
        if (auto f = premise(d, 0, p.lhs(), z)) return f;
        return premise(d, 1, p.rhs(), z);
      case Rule::Exi_E: {
        const Formula& major = d.premises[0].goal;
        if (!major.is(Formula::Kind::Exi)) return violation("premise 1 must prove an existential");
        const Id& c = d.witness->name();
        if (auto f = premise(d, 0, major, z)) return f;
        if (auto f = premise(d, 1, p, cons(sub(0, *d.witness, major.body()), z))) return f;
        std::vector<Formula> scope = cons(major.body(), cons(p, z));
        if (!news(c, scope)) return violation("newness violated: constant " + c + " occurs in the context");
        return std::nullopt;
      }
      case Rule::Exi_I:
        if (!p.is(Formula::Kind::Exi)) return violation("goal is not an existential");
        return premise(d, 0, sub(0, *d.witness, p.body()), z);
      case Rule::Uni_E: {
        const Formula& major = d.premises[0].goal;
        if (!major.is(Formula::Kind::Uni)) return violation("premise must prove a universal");
        if (sub(0, *d.witness, major.body()) != p) {
          return violation("goal is not the instance of the premise at the witness");
        }
        return premise(d, 0, major, z);
      }
      case Rule::Uni_I: {
        if (!p.is(Formula::Kind::Uni)) return violation("goal is not a universal");
        const Id& c = d.witness->name();
        if (auto f = premise(d, 0, sub(0, *d.witness, p.body()), z)) return f;
        if (!news(c, cons(p.body(), z))) return violation("newness violated: constant " + c + " occurs in the context");
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::vector<std::size_t> path_;
};

void collect_rules(const Derivation& d, std::vector<Rule>& out) {
  out.push_back(d.rule);
  for (const auto& p : d.premises) collect_rules(p, out);
}

}  // namespace

CheckReport check(const Derivation& d) {
  CheckReport report;
  report.failure = Checker().run(d);
  report.ok = !report.failure.has_value();
  return report;
}

std::vector<Rule> rule_sequence(const Derivation& d) {
  std::vector<Rule> out;
  collect_rules(d, out);
  return out;
}

}  // namespace natded
