#pragma once

// Backward-chaining proof construction over a goal tree.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "natded/kernel.hpp"

namespace natded {

using NodeId = std::size_t;

// Rule application failures; `code()` is the RuleError kind.
class RuleError : public Error {
 public:
  using Error::Error;
};

// Newness obligation discharged when a constant was introduced.
struct SideCondition {
  Id constant;
  std::vector<Formula> scope;  // formulas the constant must not occur in
  std::string description;
};

struct Applied {
  Rule rule = Rule::Assume;
  std::optional<Term> witness;
  std::optional<SideCondition> side_condition;
  bool automatic = false;  // closed by auto-Assume

  friend bool operator==(const Applied& a, const Applied& b) {
    return a.rule == b.rule && a.witness == b.witness && a.automatic == b.automatic &&
           a.side_condition.has_value() == b.side_condition.has_value() &&
           (!a.side_condition || (a.side_condition->constant == b.side_condition->constant &&
                                  a.side_condition->scope == b.side_condition->scope));
  }
};

struct Node {
  NodeId id = 0;
  Formula goal = Formula::falsity();
  std::vector<Formula> assumptions;
  std::optional<Applied> applied;  // absent: open leaf
  std::vector<NodeId> children;
  std::optional<NodeId> parent;

  bool open() const { return !applied.has_value(); }

  friend bool operator==(const Node&, const Node&) = default;
};

struct RuleRequest {
  NodeId node = 0;
  Rule rule = Rule::Assume;
  // Required for Exi_I and Uni_E, rejected otherwise.
  std::optional<Term> witness;
  // Auxiliary formula for rules whose premises are not determined by the
  // goal: Imp_E (the antecedent), Dis_E (the disjunction), Con_E1 (the
  // right conjunct), Con_E2 (the left conjunct), Exi_E (the existential)
  // and optionally Uni_E (the universal). When absent for the first five,
  // the first fitting assumption is used.
  std::optional<Formula> formula;
};

// Replay hook: proposes the constant for Exi_E/Uni_I instead of the
// engine's choice. It must be new for the whole tree.
struct ApplyOptions {
  std::optional<Id> constant;
};

// A line of the preorder view: indentation equals depth.
struct Line {
  std::size_t number = 0;  // 1-based
  std::size_t depth = 0;
  NodeId node = 0;
};

class ProofState {
 public:
  // Throws RuleError("OpenFormula") or Error("IllFormed").
  static ProofState new_session(const Formula& goal);

  const Formula& root_goal() const { return nodes_.front().goal; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const;

  void apply_rule(const RuleRequest& request, const ApplyOptions& options = {});
  // Throws RuleError("NothingToUndo") on an empty history.
  void undo();
  std::size_t history_size() const { return history_.size(); }

  // First of c', c'', c''', ... new for every formula in the tree and not a
  // symbol of the root goal.
  Id fresh_constant() const;
  bool is_fresh(const Id& c) const;

  bool is_complete() const;
  // Throws RuleError("Incomplete") while open leaves remain.
  Derivation extract() const;

  std::vector<Line> lines() const;
  std::vector<NodeId> open_leaves() const;

  friend bool operator==(const ProofState&, const ProofState&) = default;

 private:
  struct Edit {
    NodeId target = 0;
    std::size_t nodes_before = 0;

    friend bool operator==(const Edit&, const Edit&) = default;
  };

  NodeId add_child(NodeId parent, Formula goal, std::vector<Formula> assumptions);
  Derivation extract_from(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<Edit> history_;
};

// Rebuilds a session from a derivation by applying its rules top-down.
// Subtrees the engine closes on its own are skipped. A constant that the
// engine considers taken is renamed within its subtree. Throws RuleError
// when a step cannot be replayed.
ProofState replay(const Derivation& d);

// Unification against a substitution instance: t with sub(0, t, body) =
// instance. Returns AnyTerm when body never mentions the bound variable.
struct AnyTerm {
  friend bool operator==(const AnyTerm&, const AnyTerm&) = default;
};
struct NoMatch {
  std::string reason;
};
using WitnessMatch = std::variant<Term, AnyTerm, NoMatch>;

WitnessMatch infer_witness(const Formula& body, const Formula& instance);

// Default for vacuous witnesses: the constant `a`, or the first of a1, a2,
// ... that does not clash with `avoid`.
Term default_witness(const Signature& avoid);

}  // namespace natded
