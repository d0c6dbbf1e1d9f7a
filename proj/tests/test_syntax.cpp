#include <doctest.h>

#include "natded/syntax.hpp"
#include "support/generators.hpp"

using namespace natded;
using natded::testing::Rng;

namespace {

Term v(std::size_t n) { return Term::var(n); }
Formula A(std::vector<Term> args) { return Formula::pre("A", std::move(args)); }

ParseFailure failure_of(std::string_view text) {
  try {
    parse_formula(text);
  } catch (const ParseError& e) {
    return e.failure();
  }
  FAIL("expected a parse error for " << text);
  return ParseFailure::MalformedToken;
}

}  // namespace

TEST_CASE("outer binder gets the larger index") {
  Formula expected = Formula::imp(Formula::uni(Formula::uni(A({v(1), v(0)}))), Formula::uni(A({v(0), v(0)})));
  CHECK(parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))") == expected);
  CHECK(parse_formula("(∀x. ∀y. A(x, y)) ⟶ (∀x. A(x, x))") == expected);
}

TEST_CASE("indices count binders from the innermost outwards") {
  // A(z, u) under forall u. forall z.: z is the closest binder.
  Formula f = parse_formula("forall x. forall y. (forall u. forall z. A(z,u)) ---> A(x,y)");
  Formula expected = Formula::uni(Formula::uni(
      Formula::imp(Formula::uni(Formula::uni(A({v(0), v(1)}))), A({v(1), v(0)}))));
  CHECK(f == expected);
}

TEST_CASE("sugar expands") {
  CHECK(parse_formula("falsity ---> falsity") == Formula::imp(Formula::falsity(), Formula::falsity()));
  CHECK(parse_formula("truth") == Formula::truth());
  CHECK(parse_formula("~A") == Formula::imp(Formula::pre("A"), Formula::falsity()));
  CHECK(parse_formula("¬A") == parse_formula("~A"));
  CHECK(parse_formula("A <-> B") == Formula::iff(Formula::pre("A"), Formula::pre("B")));
  CHECK(parse_formula("A ↔ B") == parse_formula("A <-> B"));
  CHECK(parse_formula("⊥") == Formula::falsity());
  CHECK(parse_formula("⊤") == Formula::truth());
}

TEST_CASE("precedence and associativity") {
  const Formula a = Formula::pre("A"), b = Formula::pre("B"), c = Formula::pre("C");
  CHECK(parse_formula("A & B | C") == Formula::dis(Formula::con(a, b), c));
  CHECK(parse_formula("A | B & C") == Formula::dis(a, Formula::con(b, c)));
  CHECK(parse_formula("A --> B --> C") == Formula::imp(a, Formula::imp(b, c)));
  CHECK(parse_formula("A | B --> C") == Formula::imp(Formula::dis(a, b), c));
  CHECK(parse_formula("A & B & C") == Formula::con(Formula::con(a, b), c));
  CHECK(parse_formula("~A & B") == Formula::con(Formula::neg(a), b));
  CHECK(parse_formula("A <-> B --> C") == Formula::iff(a, Formula::imp(b, c)));
  // Quantifier scope extends as far right as possible.
  CHECK(parse_formula("forall x. P(x) --> Q") ==
        Formula::uni(Formula::imp(Formula::pre("P", {v(0)}), Formula::pre("Q"))));
  CHECK(parse_formula("forall x y. R(x, y)") == Formula::uni(Formula::uni(Formula::pre("R", {v(1), v(0)}))));
  CHECK(parse_formula("A -> B") == parse_formula("A ⟶ B"));
  CHECK(parse_formula("A /\\ B \\/ C") == parse_formula("A ∧ B ∨ C"));
  CHECK(parse_formula("?x. P(x)") == parse_formula("∃x. P(x)"));
}

TEST_CASE("parse errors") {
  CHECK(failure_of("A(x)") == ParseFailure::UnboundVariable);
  CHECK(failure_of("P(a) & P(a, a)") == ParseFailure::ArityClash);
  CHECK(failure_of("P(f(a)) & P(f(a, a))") == ParseFailure::ArityClash);
  CHECK(failure_of("A $ B") == ParseFailure::MalformedToken);
  CHECK(failure_of("A &") == ParseFailure::UnexpectedToken);
  CHECK(failure_of("(A") == ParseFailure::UnexpectedToken);
  CHECK(failure_of("") == ParseFailure::UnexpectedToken);
  try {
    parse_formula("P(a) & Q(y)");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 9);
  }
}

TEST_CASE("constants and the #n escape") {
  CHECK(parse_formula("P(a)") == Formula::pre("P", {Term::fun("a")}));
  CHECK(parse_formula("P(#1)") == Formula::pre("P", {v(1)}));
  CHECK(parse_formula("forall x. R(x, #0)") == Formula::uni(Formula::pre("R", {v(0), v(0)})));
  CHECK(parse_formula("P(x())") == Formula::pre("P", {Term::fun("x")}));
  CHECK(parse_term("f(c', #2)") == Term::fun("f", {Term::fun("c'"), v(2)}));
  CHECK(render_formula(Formula::pre("P", {Term::fun("x")}), PrintStyle::Named) == "P(x())");
}

TEST_CASE("printers") {
  Formula f = parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))");
  CHECK(render_formula(f, PrintStyle::DeepEmbed) ==
        "Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Uni (Pre ''A'' [Var 0, Var 0]))");
  CHECK(render_formula(f, PrintStyle::Named) == "(∀x. ∀y. A(x, y)) ⟶ (∀x. A(x, x))");
  CHECK(render_formula(f, PrintStyle::Typewriter) == "(!x. !y. A(x, y)) ---> (!x. A(x, x))");
  CHECK(render_formula(Formula::falsity(), PrintStyle::Typewriter) == "falsity");
  CHECK(render_formula(Formula::falsity(), PrintStyle::Named) == "⊥");
  CHECK(render_term(Term::fun("c'"), PrintStyle::DeepEmbed) == "Fun ''c\\''' []");
  // Bound names skip symbols of the formula.
  Formula g = Formula::uni(Formula::pre("P", {Term::fun("x"), v(0)}));
  CHECK(render_formula(g, PrintStyle::Named) == "∀y. P(x(), y)");
}

TEST_CASE("bound name sequence") {
  auto names = bound_names(8, Signature{});
  CHECK(names == std::vector<std::string>{"x", "y", "z", "u", "v", "w", "x1", "y1"});
  Signature sig;
  sig.predicates["y"] = 0;
  CHECK(bound_names(2, sig) == std::vector<std::string>{"x", "z"});
}

TEST_CASE("deep form parser") {
  Formula f = parse_deep_formula("Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Uni (Pre ''A'' [Var 0, Var 0]))");
  CHECK(f == parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))"));
  CHECK(parse_deep_formula("Imp Falsity Falsity") == Formula::truth());
  CHECK(parse_deep_formula_list("[]").empty());
  CHECK(parse_deep_formula_list("[Falsity, Pre ''Q'' []]").size() == 2);
  CHECK(parse_deep_term("Fun ''c\\''' []") == Term::fun("c'"));
  CHECK_THROWS_AS(parse_deep_formula("Imp Falsity"), ParseError);
  CHECK_THROWS_AS(parse_deep_formula("Con (Pre ''P'' [Var 0]) (Pre ''P'' [])"), ParseError);
}

TEST_CASE("well-formedness") {
  CHECK(is_well_formed(parse_formula("P(a) & Q")));
  Formula bad = Formula::con(Formula::pre("P", {Term::fun("a")}), Formula::pre("P"));
  CHECK_FALSE(is_well_formed(bad));
  CHECK_THROWS_AS(require_well_formed(bad), Error);
  CHECK(is_closed(parse_formula("forall x. P(x)")));
  CHECK_FALSE(is_closed(Formula::pre("P", {v(0)})));
  CHECK(free_bound(Formula::uni(Formula::pre("R", {v(0), v(2)}))) == 2);
}

TEST_CASE("named and typewriter round trip on random closed formulas") {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_closed_formula(rng, 4);
    CAPTURE(render_formula(f, PrintStyle::DeepEmbed));
    REQUIRE(parse_formula(render_formula(f, PrintStyle::Named)) == f);
    REQUIRE(parse_formula(render_formula(f, PrintStyle::Typewriter)) == f);
  }
}

TEST_CASE("deep round trip on random open formulas") {
  Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, 4, 0, 3);
    REQUIRE(parse_deep_formula(render_formula(f, PrintStyle::DeepEmbed)) == f);
    // Open formulas survive the surface printers through #n.
    REQUIRE(parse_formula(render_formula(f, PrintStyle::Named)) == f);
  }
}
