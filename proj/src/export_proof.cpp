#include <functional>

#include "natded/export.hpp"

namespace natded {

namespace {

void serialize_node(const Derivation& d, std::size_t depth, std::string& out) {
  out.append(2 * depth, ' ');
  out += rule_name(d.rule);
  out += " | ";
  out += render_formula(d.goal, PrintStyle::DeepEmbed);
  out += " | ";
  out += render_deep_formula_list(d.assumptions);
  if (d.witness) {
    out += " | ";
    out += render_term(*d.witness, PrintStyle::DeepEmbed);
  }
  out += '\n';
  for (const auto& p : d.premises) serialize_node(p, depth + 1, out);
}

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_fields(std::string_view line, std::size_t first_column) {
  std::vector<Field> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t bar = line.find('|', start);
    std::string_view raw = line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start);
    std::size_t lead = 0;
    while (lead < raw.size() && raw[lead] == ' ') ++lead;
    std::size_t end = raw.size();
    while (end > lead && (raw[end - 1] == ' ' || raw[end - 1] == '\r')) --end;
    out.push_back({raw.substr(lead, end - lead), first_column + start + lead});
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return out;
}

struct ParsedNode {
  Derivation d;
  std::size_t line = 0;
  bool witness_given = false;
  std::vector<std::size_t> children;  // indices into the node table
};

template <class Fn>
auto field_parse(const Field& field, std::size_t line, Fn&& fn) {
  try {
    return fn(field.text);
  } catch (const ParseError& e) {
    if (e.failure() == ParseFailure::ArityClash) throw InvariantError(e.what(), line);
    throw FormatError(e.what(), line, field.column + e.position());
  }
}

void fill_witness(ParsedNode& node, const std::vector<ParsedNode>& table) {
  Derivation& d = node.d;
  const bool needs = rule_has_witness(d.rule);
  if (!needs && node.witness_given) throw InvariantError(std::string(rule_name(d.rule)) + " takes no witness", node.line);
  if (!needs) return;
  if (node.witness_given) {
    if (rule_introduces_constant(d.rule) && !d.witness->is_constant()) {
      throw InvariantError(std::string(rule_name(d.rule)) + " needs a constant witness", node.line);
    }
    return;
  }
  if (rule_introduces_constant(d.rule)) {
    throw InvariantError(std::string(rule_name(d.rule)) + " needs its fresh constant", node.line);
  }
  const Formula& premise_goal = table[node.children.front()].d.goal;
  WitnessMatch match = NoMatch{"shape mismatch"};
  Signature avoid = signature_of(d.goal);
  collect_signature(premise_goal, avoid);
  if (d.rule == Rule::Exi_I && d.goal.is(Formula::Kind::Exi)) {
    match = infer_witness(d.goal.body(), premise_goal);
  } else if (d.rule == Rule::Uni_E && premise_goal.is(Formula::Kind::Uni)) {
    match = infer_witness(premise_goal.body(), d.goal);
  }
  if (auto* t = std::get_if<Term>(&match)) {
    d.witness = *t;
  } else if (std::holds_alternative<AnyTerm>(match)) {
    d.witness = default_witness(avoid);
  } else {
    throw InvariantError("cannot infer the witness: " + std::get<NoMatch>(match).reason, node.line);
  }
}

}  // namespace

std::string serialize_proof(const Derivation& d) {
  std::string out(kProofHeader);
  out += '\n';
  serialize_node(d, 0, out);
  return out;
}

std::string serialize_partial(const ProofState& state) {
  std::string out(kProofHeader);
  out += '\n';
  for (const auto& line : state.lines()) {
    const Node& n = state.node(line.node);
    out.append(2 * line.depth, ' ');
    out += n.applied ? std::string(rule_name(n.applied->rule)) : std::string("?");
    out += " | ";
    out += render_formula(n.goal, PrintStyle::DeepEmbed);
    out += " | ";
    out += render_deep_formula_list(n.assumptions);
    if (n.applied && n.applied->witness) {
      out += " | ";
      out += render_term(*n.applied->witness, PrintStyle::DeepEmbed);
    }
    out += '\n';
  }
  return out;
}

Derivation parse_proof(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \r\t") == std::string_view::npos) lines.pop_back();
  if (lines.empty()) throw FormatError("empty proof text", 1, 1);
  std::string_view header = lines.front();
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != kProofHeader) throw FormatError("expected header '" + std::string(kProofHeader) + "'", 1, 1);
  if (lines.size() == 1) throw FormatError("no proof nodes", 2, 1);

  std::vector<ParsedNode> table;
  std::vector<std::size_t> stack;  // open ancestors by depth
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    std::size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    if (indent == line.size()) throw FormatError("blank line inside the proof", lineno, 1);
    if (indent % 2 != 0) throw FormatError("indentation must be a multiple of two spaces", lineno, indent + 1);
    const std::size_t depth = indent / 2;
    if (depth > stack.size()) throw FormatError("indentation skips a level", lineno, indent + 1);
    if (depth == 0 && !table.empty()) throw FormatError("more than one root node", lineno, 1);

    auto fields = split_fields(line.substr(indent), indent + 1);
    if (fields.size() < 3 || fields.size() > 4) {
      throw FormatError("expected 'rule | goal | [assumptions]' with an optional '| witness'", lineno, indent + 1);
    }
    ParsedNode node;
    node.line = lineno;
    if (fields[0].text == "?") throw FormatError("open goal in proof text", lineno, fields[0].column);
    auto rule = rule_from_name(fields[0].text);
    if (!rule) throw FormatError("unknown rule '" + std::string(fields[0].text) + "'", lineno, fields[0].column);
    node.d.rule = *rule;
    node.d.goal = field_parse(fields[1], lineno, [](std::string_view t) { return parse_deep_formula(t); });
    node.d.assumptions = field_parse(fields[2], lineno, [](std::string_view t) { return parse_deep_formula_list(t); });
    if (fields.size() == 4) {
      node.d.witness = field_parse(fields[3], lineno, [](std::string_view t) { return parse_deep_term(t); });
      node.witness_given = true;
    }

    stack.resize(depth);
    std::size_t index = table.size();
    if (depth > 0) table[stack.back()].children.push_back(index);
    table.push_back(std::move(node));
    stack.push_back(index);
  }

  // Assemble bottom-up: children always follow their parent.
  for (std::size_t i = table.size(); i-- > 0;) {
    ParsedNode& node = table[i];
    if (node.children.size() != rule_arity(node.d.rule)) {
      throw InvariantError(std::string(rule_name(node.d.rule)) + " needs " + std::to_string(rule_arity(node.d.rule)) +
                               " premises, found " + std::to_string(node.children.size()),
                           node.line);
    }
    fill_witness(node, table);
    for (std::size_t c : node.children) node.d.premises.push_back(std::move(table[c].d));
  }
  return std::move(table.front().d);
}

}  // namespace natded
