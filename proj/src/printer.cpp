#include <array>

#include "natded/syntax.hpp"

namespace natded {
namespace {

constexpr std::array<std::string_view, 6> kNameCycle{"x", "y", "z", "u", "v", "w"};

struct Spellings {
  std::string_view forall, exists, imp, dis, con, falsity;
};

constexpr Spellings kNamed{"∀", "∃", " ⟶ ", " ∨ ", " ∧ ", "⊥"};
constexpr Spellings kTypewriter{"!", "?", " ---> ", " | ", " & ", "falsity"};

// Binding strength; a quantifier extends as far right as possible.
enum Level { kQuant = 0, kImp = 1, kDis = 2, kCon = 3, kAtom = 4 };

class SurfacePrinter {
 public:
  SurfacePrinter(const Spellings& spell, const Signature& avoid) : spell_(spell), avoid_(avoid) {}

  void formula(const Formula& f, int ctx, std::string& out) {
    switch (f.kind()) {
      case Formula::Kind::Falsity:
        out += spell_.falsity;
        return;
      case Formula::Kind::Pre:
        out += f.name();
        if (!f.args().empty()) args(f.args(), out);
        return;
      case Formula::Kind::Imp:
        binary(f, kImp, kDis, kImp, spell_.imp, ctx, out);
        return;
      case Formula::Kind::Dis:
        binary(f, kDis, kDis, kCon, spell_.dis, ctx, out);
        return;
      case Formula::Kind::Con:
        binary(f, kCon, kCon, kAtom, spell_.con, ctx, out);
        return;
      case Formula::Kind::Exi:
      case Formula::Kind::Uni: {
        bool paren = ctx > kQuant;
        if (paren) out += '(';
        out += f.is(Formula::Kind::Uni) ? spell_.forall : spell_.exists;
        out += name_at(depth_);
        out += ". ";
        ++depth_;
        formula(f.body(), kQuant, out);
        --depth_;
        if (paren) out += ')';
        return;
      }
    }
  }

  void term(const Term& t, std::string& out) {
    if (t.is_var()) {
      if (t.index() < depth_) {
        out += name_at(depth_ - 1 - t.index());
      } else {
        out += '#';
        out += std::to_string(t.index());
      }
      return;
    }
    out += t.name();
    if (!t.args().empty() || is_variable_like(t.name())) args(t.args(), out);
  }

 private:
  // Children of a binary node are printed at `left`/`right` levels; a
  // quantifier child always gets parentheses.
  void binary(const Formula& f, int self, int left, int right, std::string_view op, int ctx,
              std::string& out) {
    bool paren = ctx > self;
    if (paren) out += '(';
    formula(f.lhs(), left, out);
    out += op;
    formula(f.rhs(), right, out);
    if (paren) out += ')';
  }

  void args(const std::vector<Term>& ts, std::string& out) {
    out += '(';
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) out += ", ";
      term(ts[i], out);
    }
    out += ')';
  }

  const std::string& name_at(std::size_t depth) {
    if (names_.size() <= depth) names_ = bound_names(depth + 1, avoid_);
    return names_[depth];
  }

  const Spellings& spell_;
  const Signature& avoid_;
  std::vector<std::string> names_;
  std::size_t depth_ = 0;
};

std::string quote_id(const Id& name) {
  std::string out = "''";
  for (char ch : name) {
    if (ch == '\'' || ch == '\\') out += '\\';
    out += ch;
  }
  out += "''";
  return out;
}

void deep_term(const Term& t, std::string& out) {
  if (t.is_var()) {
    out += "Var ";
    out += std::to_string(t.index());
    return;
  }
  out += "Fun ";
  out += quote_id(t.name());
  out += " [";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ", ";
    deep_term(t.args()[i], out);
  }
  out += ']';
}

void deep_formula(const Formula& f, std::string& out);

void deep_operand(const Formula& f, std::string& out) {
  if (f.is(Formula::Kind::Falsity)) {
    out += "Falsity";
    return;
  }
  out += '(';
  deep_formula(f, out);
  out += ')';
}

void deep_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Falsity:
      out += "Falsity";
      return;
    case Formula::Kind::Pre:
      out += "Pre ";
      out += quote_id(f.name());
      out += " [";
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ", ";
        deep_term(f.args()[i], out);
      }
      out += ']';
      return;
    case Formula::Kind::Imp:
    case Formula::Kind::Dis:
    case Formula::Kind::Con:
      out += f.is(Formula::Kind::Imp) ? "Imp " : f.is(Formula::Kind::Dis) ? "Dis " : "Con ";
      deep_operand(f.lhs(), out);
      out += ' ';
      deep_operand(f.rhs(), out);
      return;
    case Formula::Kind::Exi:
    case Formula::Kind::Uni:
      out += f.is(Formula::Kind::Exi) ? "Exi " : "Uni ";
      deep_operand(f.body(), out);
      return;
  }
}

}  // namespace

std::vector<std::string> bound_names(std::size_t count, const Signature& avoid) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t round = 0; out.size() < count; ++round) {
    for (auto base : kNameCycle) {
      if (out.size() == count) break;
      std::string name(base);
      if (round > 0) name += std::to_string(round);
      if (avoid.functions.count(name) || avoid.predicates.count(name)) continue;
      out.push_back(std::move(name));
    }
  }
  return out;
}

std::string render_formula(const Formula& f, PrintStyle style) {
  std::string out;
  if (style == PrintStyle::DeepEmbed) {
    deep_formula(f, out);
    return out;
  }
  Signature avoid = signature_of(f);
  SurfacePrinter printer(style == PrintStyle::Named ? kNamed : kTypewriter, avoid);
  printer.formula(f, kQuant, out);
  return out;
}

std::string render_term(const Term& t, PrintStyle style) {
  std::string out;
  if (style == PrintStyle::DeepEmbed) {
    deep_term(t, out);
    return out;
  }
  Signature avoid;
  SurfacePrinter printer(style == PrintStyle::Named ? kNamed : kTypewriter, avoid);
  printer.term(t, out);
  return out;
}

std::string render_deep_formula_list(const std::vector<Formula>& fs) {
  std::string out = "[";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    deep_formula(fs[i], out);
  }
  out += ']';
  return out;
}

}  // namespace natded
