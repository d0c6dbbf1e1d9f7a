#include <doctest.h>

#include <fstream>
#include <sstream>

#include "natded/export.hpp"
#include "support/generators.hpp"

using namespace natded;
using natded::testing::Rng;

namespace {

Formula F(const char* text) { return parse_formula(text); }
Term c(const char* name) { return Term::fun(name); }

Derivation golden() {
  ProofState s = ProofState::new_session(F("(forall x. R(x, x)) --> (forall x. exists y. R(x, y))"));
  s.apply_rule({0, Rule::Imp_I});
  s.apply_rule({1, Rule::Uni_I});
  s.apply_rule({2, Rule::Exi_I, c("c'")});
  s.apply_rule({3, Rule::Uni_E, c("c'")});
  return s.extract();
}

// forall x. forall y. (forall u. forall z. A(z, u)) --> A(x, y)
Derivation formula2() {
  ProofState s = ProofState::new_session(F("forall x. forall y. (forall u. forall z. A(z, u)) --> A(x, y)"));
  s.apply_rule({0, Rule::Uni_I});
  s.apply_rule({1, Rule::Uni_I});
  s.apply_rule({2, Rule::Imp_I});
  s.apply_rule({3, Rule::Uni_E, c("c'")});
  s.apply_rule({4, Rule::Uni_E, c("c''")});
  return s.extract();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class E>
E error_of(std::string_view text) {
  try {
    parse_proof(text);
  } catch (const E& e) {
    return e;
  }
  FAIL("no error for: " << text);
  throw;
}

}  // namespace

TEST_CASE("golden proof text") {
  const std::string text = serialize_proof(golden());
  CHECK(text ==
        "NADEA-PROOF 1\n"
        "Imp_I | Imp (Uni (Pre ''R'' [Var 0, Var 0])) (Uni (Exi (Pre ''R'' [Var 1, Var 0]))) | []\n"
        "  Uni_I | Uni (Exi (Pre ''R'' [Var 1, Var 0])) | [Uni (Pre ''R'' [Var 0, Var 0])] | Fun ''c\\''' []\n"
        "    Exi_I | Exi (Pre ''R'' [Fun ''c\\''' [], Var 0]) | [Uni (Pre ''R'' [Var 0, Var 0])] | Fun ''c\\''' []\n"
        "      Uni_E | Pre ''R'' [Fun ''c\\''' [], Fun ''c\\''' []] | [Uni (Pre ''R'' [Var 0, Var 0])] | Fun ''c\\''' []\n"
        "        Assume | Uni (Pre ''R'' [Var 0, Var 0]) | [Uni (Pre ''R'' [Var 0, Var 0])]\n");
  CHECK(parse_proof(text) == golden());
}

TEST_CASE("round trip of random shaped derivations") {
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    Derivation d = testing::random_shaped_derivation(rng, 4);
    const std::string text = serialize_proof(d);
    CAPTURE(text);
    REQUIRE(parse_proof(text) == d);
  }
}

TEST_CASE("round trip of checked derivations") {
  Rng rng(73);
  testing::DerivationGenerator gen(rng);
  for (int i = 0; i < 200; ++i) {
    Derivation d = gen.generate({}, 4);
    REQUIRE(parse_proof(serialize_proof(d)) == d);
  }
}

TEST_CASE("omitted witnesses are inferred") {
  std::string text = serialize_proof(golden());
  // Drop the Exi_I and Uni_E witnesses.
  std::string stripped;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find("Exi_I") != std::string::npos || line.find("Uni_E") != std::string::npos) {
      line = line.substr(0, line.rfind(" | "));
    }
    stripped += line + "\n";
  }
  CHECK(parse_proof(stripped) == golden());

  // Vacuous quantifier: the default witness `a`.
  Derivation d = parse_proof(
      "NADEA-PROOF 1\n"
      "Exi_I | Exi (Pre ''Q'' []) | [Pre ''Q'' []]\n"
      "  Assume | Pre ''Q'' [] | [Pre ''Q'' []]\n");
  CHECK(d.witness == c("a"));
  CHECK(check(d).ok);
}

TEST_CASE("format errors") {
  CHECK(error_of<FormatError>("").line() == 1);
  CHECK(error_of<FormatError>("NADEA-PROOF 2\nAssume | Falsity | [Falsity]\n").line() == 1);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\n").line() == 2);
  auto e = error_of<FormatError>("NADEA-PROOF 1\nAssume | Falsty | [Falsity]\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 10);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\nCut | Falsity | []\n").column() == 1);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\nBoole | Falsity | []\n   Assume | Falsity | []\n").line() == 3);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\nBoole | Falsity | []\n    Assume | Falsity | []\n").line() == 3);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\nAssume | Falsity | [Falsity]\nAssume | Falsity | [Falsity]\n").line() == 3);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\nAssume | Falsity\n").line() == 2);
  CHECK(error_of<FormatError>("NADEA-PROOF 1\n? | Falsity | []\n").line() == 2);
  // Trailing blank lines are tolerated, CRLF too.
  CHECK_NOTHROW(parse_proof("NADEA-PROOF 1\r\nAssume | Falsity | [Falsity]\r\n\n\n"));
}

TEST_CASE("invariant errors") {
  CHECK(error_of<InvariantError>("NADEA-PROOF 1\nImp_I | Imp Falsity Falsity | []\n").line() == 2);
  CHECK(error_of<InvariantError>("NADEA-PROOF 1\nAssume | Falsity | [Falsity] | Fun ''a'' []\n").line() == 2);
  CHECK(error_of<InvariantError>(
            "NADEA-PROOF 1\nUni_I | Uni (Pre ''P'' [Var 0]) | [] | Fun ''f'' [Fun ''a'' []]\n"
            "  Assume | Pre ''P'' [Fun ''f'' [Fun ''a'' []]] | []\n")
            .line() == 2);
  CHECK(error_of<InvariantError>(
            "NADEA-PROOF 1\nAssume | Con (Pre ''P'' [Fun ''a'' []]) (Pre ''P'' []) | []\n")
            .line() == 2);
  // Witness cannot be recovered.
  CHECK(error_of<InvariantError>(
            "NADEA-PROOF 1\nExi_I | Exi (Pre ''R'' [Var 0, Var 0]) | []\n"
            "  Assume | Pre ''R'' [Fun ''a'' [], Fun ''b'' []] | []\n")
            .line() == 2);
}

TEST_CASE("parse does not run the kernel") {
  Derivation d = parse_proof("NADEA-PROOF 1\nAssume | Falsity | []\n");
  CHECK_FALSE(check(d).ok);
}

TEST_CASE("partial export") {
  ProofState s = ProofState::new_session(F("A --> A & A"));
  s.apply_rule({0, Rule::Imp_I});
  s.apply_rule({1, Rule::Con_I});
  CHECK(serialize_partial(s) ==
        "NADEA-PROOF 1\n"
        "Imp_I | Imp (Pre ''A'' []) (Con (Pre ''A'' []) (Pre ''A'' [])) | []\n"
        "  Con_I | Con (Pre ''A'' []) (Pre ''A'' []) | [Pre ''A'' []]\n"
        "    Assume | Pre ''A'' [] | [Pre ''A'' []]\n"
        "    Assume | Pre ''A'' [] | [Pre ''A'' []]\n");
  ProofState t = ProofState::new_session(F("A --> B"));
  const std::string partial = serialize_partial(t);
  CHECK(partial == "NADEA-PROOF 1\n? | Imp (Pre ''A'' []) (Pre ''B'' []) | []\n");
  CHECK_THROWS_AS(parse_proof(partial), FormatError);
}

TEST_CASE("universal prefix") {
  auto p = strip_unis(F("forall x. forall y. (forall u. forall z. A(z, u)) --> A(x, y)"));
  CHECK(p.count == 2);
  CHECK(p.core == parse_deep_formula("Imp (Uni (Uni (Pre ''A'' [Var 0, Var 1]))) (Pre ''A'' [Var 1, Var 0])"));
  CHECK(strip_unis(Formula::falsity()).count == 0);
  CHECK(strip_unis(Formula::uni(Formula::falsity())).core == Formula::falsity());
  Rng rng(79);
  for (int i = 0; i < 500; ++i) {
    Formula f = testing::random_closed_formula(rng, 4);
    auto s = strip_unis(f);
    REQUIRE_FALSE(s.core.is(Formula::Kind::Uni));
    REQUIRE(put_unis(s.count, s.core) == f);
  }
}

TEST_CASE("shallow Isabelle rendering") {
  CHECK(render_isabelle(F("(forall x. R(x, x)) --> (forall x. exists y. R(x, y))"), true) ==
        "(! x. R x x) --> (! x. ? y. R x y)");
  CHECK(render_isabelle(F("forall x. P(f(x)) & Q | S"), false) ==
        "\\<forall>x. P (f x) \\<and> Q \\<or> S");
  CHECK(render_isabelle(F("A --> B --> C"), true) == "A --> B --> C");
  CHECK(render_isabelle(F("(A --> B) --> C"), true) == "(A --> B) --> C");
  CHECK(render_isabelle(Formula::falsity(), true) == "False");
  CHECK(render_isabelle(Formula::pre("R", {Term::var(1), Term::var(0)}), true, 2) == "R x y");
}

TEST_CASE("closed theorem") {
  const Derivation d = golden();
  const std::string isar = to_isar_closed(d);
  CHECK(extract_rule_tokens(isar) == rule_sequence(d));
  CHECK(isar.find("proposition \\<open>(! x. R x x) --> (! x. ? y. R x y)\\<close>\n  by metis\n") == 0);
  CHECK(isar.find("proof (rule soundness)") != std::string::npos);
  CHECK(isar == to_isar_closed(d));
  IsarDoc doc = build_isar_closed(d);
  CHECK(doc.kind == IsarDoc::Kind::ClosedTheorem);
  REQUIRE(doc.derivation_steps.size() == 5);
  CHECK(doc.derivation_steps[1].discharge == IsarStep::Discharge::QedSimp);
  CHECK(doc.derivation_steps[3].simp_before);
  CHECK(doc.derivation_steps[4].discharge == IsarStep::Discharge::BySimp);
  CHECK(doc.corollaries.empty());
}

TEST_CASE("closed theorem matches the golden file") {
  const std::string expected = read_file(std::string(NATDED_GOLDEN_DIR) + "/golden_theorem.thy");
  REQUIRE_FALSE(expected.empty());
  CHECK(to_isar_closed(golden()) == expected);
}

TEST_CASE("rule order is preserved for checked derivations") {
  Rng rng(83);
  testing::DerivationGenerator gen(rng);
  for (int i = 0; i < 200; ++i) {
    Derivation d = gen.generate({}, 4);
    REQUIRE(extract_rule_tokens(to_isar_closed(d)) == rule_sequence(d));
  }
}

TEST_CASE("export preconditions") {
  auto code_of = [](auto fn) -> std::string {
    try {
      fn();
    } catch (const ExportError& e) {
      return e.code();
    }
    return "";
  };
  Derivation assumed{Rule::Assume, F("A"), {F("A")}, std::nullopt, {}};
  CHECK(check(assumed).ok);
  CHECK(code_of([&] { to_isar_closed(assumed); }) == "Unchecked");
  Derivation bad{Rule::Assume, F("A"), {}, std::nullopt, {}};
  CHECK(code_of([&] { to_isar_closed(bad); }) == "Unchecked");
  CHECK(code_of([&] { to_isar_open(golden()); }) == "NoPrefix");
  Derivation bad_uni{Rule::Assume, F("forall x. P(x)"), {}, std::nullopt, {}};
  CHECK(code_of([&] { to_isar_open(bad_uni); }) == "Unchecked");
}

TEST_CASE("scratch theory") {
  const Derivation d = formula2();
  REQUIRE(check(d).ok);
  IsarDoc doc = build_isar_open(d);
  CHECK(doc.kind == IsarDoc::Kind::OpenScratchTheory);
  CHECK(doc.prefix_count == 2);
  REQUIRE(doc.corollaries.size() == 2);
  CHECK(doc.corollaries[0].name == "open_m1");
  CHECK(doc.corollaries[1].name == "open_m0");
  const std::string isar = render_isar(doc);
  CHECK(isar.rfind("theory Scratch imports NaDeA begin\n", 0) == 0);
  CHECK(isar.size() >= 4);
  CHECK(isar.substr(isar.size() - 4) == "end\n");
  CHECK(isar.find("\\<forall>x. \\<forall>y. (\\<forall>z. \\<forall>u. A u z) \\<longrightarrow> A x y") !=
        std::string::npos);
  CHECK(isar.find("(rule any_unis)") != std::string::npos);
  CHECK(extract_rule_tokens(isar) == rule_sequence(d));

  // One corollary per stripped quantifier.
  ProofState s = ProofState::new_session(F("forall x. P(x) --> P(x)"));
  s.apply_rule({0, Rule::Uni_I});
  s.apply_rule({1, Rule::Imp_I});
  CHECK(build_isar_open(s.extract()).corollaries.size() == 1);
}
