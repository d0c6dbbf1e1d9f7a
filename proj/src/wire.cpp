#include "natded/wire.hpp"

namespace natded {

namespace {

json render_list(const std::vector<Formula>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(render_formula(f, PrintStyle::Named));
  return out;
}

const char* colour(const Node& n, const Verdictmap* verdicts) {
  if (!n.open()) return "closed";
  if (!verdicts) return "unknown";
  auto it = verdicts->find(n.id);
  if (it == verdicts->end()) return "unknown";
  return it->second.proved() ? "feasible" : "orange";
}

}  // namespace

json wire_state(const ProofState& state, const Verdictmap* verdicts) {
  json lines = json::array();
  std::size_t open = 0;
  for (const auto& line : state.lines()) {
    const Node& n = state.node(line.node);
    json rec;
    rec["number"] = line.number;
    rec["depth"] = line.depth;
    rec["node"] = n.id;
    rec["rule"] = n.applied ? std::string(rule_name(n.applied->rule)) : std::string("¤");
    rec["assumptions"] = render_list(n.assumptions);
    rec["goal"] = render_formula(n.goal, PrintStyle::Named);
    if (n.applied) {
      rec["automatic"] = n.applied->automatic;
      if (n.applied->witness) rec["witness"] = render_term(*n.applied->witness, PrintStyle::Named);
      if (n.applied->side_condition) {
        const auto& sc = *n.applied->side_condition;
        rec["side_condition"] = {{"constant", sc.constant}, {"scope", render_list(sc.scope)},
                                 {"description", sc.description}};
      }
    } else {
      ++open;
    }
    rec["feasibility"] = colour(n, verdicts);
    lines.push_back(std::move(rec));
  }
  return {
      {"goal", render_formula(state.root_goal(), PrintStyle::Named)},
      {"open", open},
      {"complete", open == 0},
      {"lines", std::move(lines)},
  };
}

json wire_verdicts(const ProofState& state, const Verdictmap& verdicts) {
  json out = json::array();
  for (const auto& line : state.lines()) {
    auto it = verdicts.find(line.node);
    if (it == verdicts.end()) continue;
    json rec{{"line", line.number}, {"node", line.node}, {"verdict", verdict_name(it->second.verdict)}};
    if (it->second.proved()) rec["bound"] = it->second.bound;
    out.push_back(std::move(rec));
  }
  return out;
}

json wire_countermodel(const CountermodelResult& result) {
  json out{{"found", result.status == SearchStatus::Found}, {"interpretations", result.interpretations}};
  switch (result.status) {
    case SearchStatus::Found:
      out["status"] = "Found";
      break;
    case SearchStatus::NotFound:
      out["status"] = "NotFound";
      break;
    case SearchStatus::BudgetExhausted:
      out["status"] = "BudgetExhausted";
      break;
  }
  if (!result.countermodel) return out;
  const Countermodel& cm = *result.countermodel;
  json functions = json::array();
  for (const auto& [key, table] : cm.model.functions()) {
    functions.push_back({{"name", key.name}, {"arity", key.arity}, {"table", table}});
  }
  json predicates = json::array();
  for (const auto& [key, table] : cm.model.predicates()) {
    predicates.push_back({{"name", key.name}, {"arity", key.arity}, {"table", table}});
  }
  out["size"] = cm.model.size();
  out["sampled"] = cm.sampled;
  out["seed"] = result.seed;
  out["functions"] = std::move(functions);
  out["predicates"] = std::move(predicates);
  out["environment"] = {{"prefix", cm.env.prefix()}, {"fallback", cm.env.fallback()}};
  return out;
}

json wire_check_failure(const CheckFailure& failure) {
  return {{"path", failure.path},
          {"kind", failure.kind == CheckFailureKind::Malformed ? "Malformed" : "RuleViolation"},
          {"reason", failure.reason}};
}

json wire_error(const std::string& code, const std::string& message, const json& detail) {
  return {{"error", code}, {"message", message}, {"detail", detail}};
}

}  // namespace natded
