#include <algorithm>
#include <optional>
#include <regex>

#include "natded/export.hpp"

namespace natded {

UniversalPrefix strip_unis(const Formula& f) {
  UniversalPrefix out;
  const Formula* cur = &f;
  while (cur->is(Formula::Kind::Uni)) {
    ++out.count;
    cur = &cur->body();
  }
  out.core = *cur;
  return out;
}

Formula put_unis(std::size_t count, const Formula& core) {
  Formula out = core;
  for (std::size_t i = 0; i < count; ++i) out = Formula::uni(std::move(out));
  return out;
}

namespace {

// ---- shallow embedding ----------------------------------------------------

class IsabellePrinter {
 public:
  IsabellePrinter(const Formula& f, bool ascii, std::size_t free_names) : ascii_(ascii), free_(free_names) {
    names_ = bound_names(free_names + quantifier_depth(f), signature_of(f));
  }

  std::string formula(const Formula& f, std::size_t depth, int ctx) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Falsity:
        return "False";
      case K::Pre: {
        std::string out = f.name();
        for (const auto& a : f.args()) out += " " + term(a, depth, true);
        return out;
      }
      case K::Imp:
        return binary(f, depth, ctx, 1, 2, 1, ascii_ ? " --> " : " \\<longrightarrow> ");
      case K::Dis:
        return binary(f, depth, ctx, 2, 3, 2, ascii_ ? " | " : " \\<or> ");
      case K::Con:
        return binary(f, depth, ctx, 3, 4, 3, ascii_ ? " & " : " \\<and> ");
      case K::Exi:
      case K::Uni: {
        const bool uni = f.is(K::Uni);
        std::string binder = ascii_ ? (uni ? "! " : "? ") : (uni ? "\\<forall>" : "\\<exists>");
        std::string out = binder + names_.at(free_ + depth) + ". " + formula(f.body(), depth + 1, 0);
        return ctx > 0 ? "(" + out + ")" : out;
      }
    }
    return {};
  }

 private:
  static std::size_t quantifier_depth(const Formula& f) {
    if (f.is_quantifier()) return 1 + quantifier_depth(f.body());
    if (f.is_binary()) return std::max(quantifier_depth(f.lhs()), quantifier_depth(f.rhs()));
    return 0;
  }

  std::string binary(const Formula& f, std::size_t depth, int ctx, int self, int left, int right,
                     const char* op) const {
    std::string out = formula(f.lhs(), depth, left) + op + formula(f.rhs(), depth, right);
    return ctx > self ? "(" + out + ")" : out;
  }

  std::string term(const Term& t, std::size_t depth, bool argument) const {
    if (t.is_var()) {
      const std::size_t scope = free_ + depth;
      if (t.index() >= scope) throw ExportError("OpenFormula", "free variable #" + std::to_string(t.index()) + " has no name");
      return names_.at(scope - 1 - t.index());
    }
    if (t.args().empty()) return t.name();
    std::string out = t.name();
    for (const auto& a : t.args()) out += " " + term(a, depth, true);
    return argument ? "(" + out + ")" : out;
  }

  bool ascii_;
  std::size_t free_;
  std::vector<std::string> names_;
};

// ---- deep embedding -------------------------------------------------------

std::string cartouche(const std::string& s) { return "\\<open>" + s + "\\<close>"; }

std::string operand(const Formula& f) {
  std::string s = render_formula(f, PrintStyle::DeepEmbed);
  return f.is(Formula::Kind::Falsity) ? s : "(" + s + ")";
}

std::string term_operand(const Term& t) {
  std::string s = render_term(t, PrintStyle::DeepEmbed);
  return "(" + s + ")";
}

std::string ok(const Formula& p, const std::vector<Formula>& z) {
  return "OK " + operand(p) + " " + render_deep_formula_list(z);
}

// `sub 0 t (q)` in deep syntax.
std::string sub_form(const Term& t, const Formula& q) { return "(sub 0 " + term_operand(t) + " " + operand(q) + ")"; }

std::string list_cons(const std::string& head, const std::vector<Formula>& z) {
  return "(" + head + " # " + render_deep_formula_list(z) + ")";
}

class ProofWriter {
 public:
  std::vector<std::string> lines;
  std::vector<IsarStep> steps;

  // Proof of `OK d.goal d.assumptions`, which the caller has stated.
  void prove(const Derivation& d, std::size_t indent) {
    IsarStep step;
    step.rule = d.rule;
    const std::string rule(rule_name(d.rule));

    if (d.rule == Rule::Assume) {
      step.discharge = IsarStep::Discharge::BySimp;
      steps.push_back(step);
      emit(indent + 2, "by (rule Assume) simp");
      return;
    }

    if (d.rule == Rule::Uni_E) {
      // The conclusion is an instance; prove it in substitution form first.
      step.simp_before = true;
      steps.push_back(step);
      const Derivation& prem = d.premises.at(0);
      emit(indent, "proof -");
      emit(indent + 2, "have " + cartouche("OK " + sub_form(*d.witness, prem.goal.body()) + " " +
                                           render_deep_formula_list(d.assumptions)));
      emit(indent + 2, "proof (rule Uni_E)");
      emit(indent + 4, "show " + cartouche(ok(prem.goal, prem.assumptions)));
      prove(prem, indent + 4);
      emit(indent + 2, "qed");
      emit(indent + 2, "then show ?thesis by simp");
      emit(indent, "qed");
      return;
    }

    const bool simp_qed = d.rule == Rule::Uni_I || d.rule == Rule::Exi_E;
    step.simp_after = simp_qed || d.rule == Rule::Exi_I;
    step.discharge = simp_qed ? IsarStep::Discharge::QedSimp : IsarStep::Discharge::Qed;
    steps.push_back(step);

    emit(indent, "proof (rule " + rule + ")");
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      const Derivation& prem = d.premises[i];
      std::optional<std::string> abstract;
      if (d.rule == Rule::Exi_I || d.rule == Rule::Uni_I) {
        abstract = "OK " + sub_form(*d.witness, d.goal.body()) + " " + render_deep_formula_list(d.assumptions);
      } else if (d.rule == Rule::Exi_E && i == 1) {
        const Formula& exi = d.premises[0].goal;
        abstract = "OK " + operand(d.goal) + " " + list_cons(sub_form(*d.witness, exi.body()), d.assumptions);
      }
      if (!abstract) {
        emit(indent + 2, "show " + cartouche(ok(prem.goal, prem.assumptions)));
        prove(prem, indent + 2);
        continue;
      }
      emit(indent + 2, "show " + cartouche(*abstract));
      emit(indent + 2, "proof -");
      emit(indent + 4, "have " + cartouche(ok(prem.goal, prem.assumptions)));
      prove(prem, indent + 4);
      emit(indent + 4, "then show ?thesis by simp");
      emit(indent + 2, "qed");
    }
    emit(indent, simp_qed ? "qed simp" : "qed");
  }

 private:
  void emit(std::size_t indent, std::string text) { lines.push_back(std::string(indent, ' ') + std::move(text)); }
};

void require_checked(const Derivation& d) {
  if (!d.assumptions.empty()) throw ExportError("Unchecked", "the root has assumptions");
  if (!is_closed(d.goal)) throw ExportError("Unchecked", "the goal has free variables");
  CheckReport report = check(d);
  if (!report.ok) throw ExportError("Unchecked", "the derivation does not check: " + report.failure->reason);
}

IsarDoc build_common(const Derivation& d, IsarDoc::Kind kind) {
  require_checked(d);
  IsarDoc doc;
  doc.kind = kind;
  doc.goal_deep = render_formula(d.goal, PrintStyle::DeepEmbed);
  ProofWriter w;
  w.prove(d, 0);
  doc.derivation_steps = std::move(w.steps);
  doc.derivation_lines = std::move(w.lines);
  return doc;
}

void append_indented(std::string& out, const std::vector<std::string>& lines, std::size_t indent) {
  for (const auto& l : lines) out += std::string(indent, ' ') + l + "\n";
}

}  // namespace

std::string render_isabelle(const Formula& f, bool ascii, std::size_t free_names) {
  if (free_bound(f) > free_names) throw ExportError("OpenFormula", "formula has unnamed free variables");
  return IsabellePrinter(f, ascii, free_names).formula(f, 0, 0);
}

IsarDoc build_isar_closed(const Derivation& d) {
  IsarDoc doc = build_common(d, IsarDoc::Kind::ClosedTheorem);
  doc.proposition_shallow = render_isabelle(d.goal, true);
  return doc;
}

IsarDoc build_isar_open(const Derivation& d) {
  UniversalPrefix prefix = strip_unis(d.goal);
  if (prefix.count == 0) throw ExportError("NoPrefix", "the goal has no outer universal quantifier");
  IsarDoc doc = build_common(d, IsarDoc::Kind::OpenScratchTheory);
  doc.proposition_shallow = render_isabelle(d.goal, false);
  doc.prefix_count = prefix.count;
  doc.core_deep = render_formula(prefix.core, PrintStyle::DeepEmbed);
  const std::string core = prefix.core.is(Formula::Kind::Falsity) ? doc.core_deep : "(" + doc.core_deep + ")";
  for (std::size_t m = prefix.count; m-- > 0;) {
    IsarCorollary c;
    c.quantifiers = m;
    c.name = "open_m" + std::to_string(m);
    c.statement = "semantics e f g (put_unis " + std::to_string(m) + " " + core + ")";
    doc.corollaries.push_back(std::move(c));
  }
  return doc;
}

std::string render_isar(const IsarDoc& doc) {
  const std::string goal = "(" + doc.goal_deep + ")";
  std::string out;
  if (doc.kind == IsarDoc::Kind::ClosedTheorem) {
    out += "proposition " + cartouche(doc.proposition_shallow) + "\n";
    out += "  by metis\n\n";
    out += "theorem generated_theorem: " + cartouche("semantics e f g " + goal) + "\n";
    out += "proof (rule soundness)\n";
    out += "  show " + cartouche("OK " + goal + " []") + "\n";
    append_indented(out, doc.derivation_lines, 2);
    out += "qed\n";
    return out;
  }

  const std::string core = "(" + doc.core_deep + ")";
  out += "theory Scratch imports NaDeA begin\n\n";
  out += "proposition " + cartouche(doc.proposition_shallow) + "\n";
  out += "  by metis\n\n";
  out += "lemma generated_lemma: " + cartouche("OK " + goal + " []") + "\n";
  append_indented(out, doc.derivation_lines, 0);
  out += "\n";
  out += "theorem generated_theorem: " + cartouche("semantics e f g " + goal) + "\n";
  out += "  using generated_lemma by (rule soundness)\n\n";
  out += "lemma generated_any: " + cartouche("OK (put_unis m " + core + ") []") + "\n";
  out += "proof (rule any_unis)\n";
  out += "  show " + cartouche("OK (put_unis " + std::to_string(doc.prefix_count) + " " + core + ") []") + "\n";
  out += "    using generated_lemma by simp\n";
  out += "qed\n";
  for (const auto& c : doc.corollaries) {
    out += "\ncorollary " + c.name + ": " + cartouche(c.statement) + "\n";
    out += "  using generated_any by (rule soundness)\n";
  }
  out += "\nend\n";
  return out;
}

std::string to_isar_closed(const Derivation& d) { return render_isar(build_isar_closed(d)); }
std::string to_isar_open(const Derivation& d) { return render_isar(build_isar_open(d)); }

std::vector<Rule> extract_rule_tokens(std::string_view isar) {
  static const std::regex pattern(R"(\(rule ([A-Za-z_0-9]+)\))");
  std::vector<Rule> out;
  std::string text(isar);
  for (std::sregex_iterator it(text.begin(), text.end(), pattern), end; it != end; ++it) {
    if (auto r = rule_from_name((*it)[1].str())) out.push_back(*r);
  }
  return out;
}

}  // namespace natded
