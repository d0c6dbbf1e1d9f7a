#include <doctest.h>

#include "natded/kernel.hpp"
#include "natded/semantics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace natded;
using natded::testing::Rng;

namespace {

Signature test_signature() {
  Signature sig;
  sig.predicates = {{"P", 1}, {"R", 2}, {"Q", 0}, {"S", 0}};
  sig.functions = {{"f", 1}, {"a", 0}, {"b", 0}};
  return sig;
}

std::vector<Element> random_env(Rng& rng, std::size_t n, std::size_t size) {
  std::vector<Element> env(n);
  for (auto& x : env) x = rng() % size;
  return env;
}

}  // namespace

TEST_CASE("environment extension shifts") {
  Environment e({4, 5}, 9);
  Environment x = e.extend(7);
  CHECK(x(0) == 7);
  CHECK(x(1) == 4);
  CHECK(x(2) == 5);
  CHECK(x(3) == 9);
  CHECK(e(100) == 9);
}

TEST_CASE("evaluation on a fixed model") {
  Model m(2);
  m.set_predicate("P", 1, {false, true});
  m.set_predicate("R", 2, {true, false, false, true});  // equality
  m.set_function("f", 1, {1, 0});
  m.set_function("a", 0, {0});
  const Environment e;
  CHECK(eval_formula(e, m, parse_formula("exists x. P(x)")));
  CHECK_FALSE(eval_formula(e, m, parse_formula("forall x. P(x)")));
  CHECK(eval_formula(e, m, parse_formula("P(f(a))")));
  CHECK(eval_formula(e, m, parse_formula("forall x. R(x, x)")));
  CHECK_FALSE(eval_formula(e, m, parse_formula("forall x. R(x, f(x))")));
  CHECK(eval_formula(e, m, parse_formula("forall x. P(x) | P(f(x))")));
  CHECK(eval_formula(e, m, Formula::truth()));
  CHECK(eval_term(Environment({1}), m, Term::fun("f", {Term::var(0)})) == 0);
  CHECK(eval_formula(Environment({1}), m, Formula::pre("P", {Term::var(0)})));
}

TEST_CASE("missing symbols and bad tables") {
  Model m(2);
  CHECK_THROWS_AS(eval_formula(Environment(), m, parse_formula("Q")), Error);
  CHECK_THROWS_AS(m.set_function("f", 1, {0}), Error);
  CHECK_THROWS_AS(m.set_function("f", 1, {0, 2}), Error);
  CHECK_THROWS_AS(Model(0), Error);
}

TEST_CASE("evaluator agrees with the named reference evaluator") {
  Rng rng(7);
  const Signature sig = test_signature();
  for (int i = 0; i < 2000; ++i) {
    const std::size_t size = 1 + rng() % 3;
    Model m = random_model(sig, size, rng);
    Formula f = testing::random_formula(rng, 4, 0, 3);
    auto env = random_env(rng, 3, size);
    REQUIRE(eval_formula(Environment(env), m, f) == testing::reference_eval(f, m, env));
  }
}

TEST_CASE("substitution lemma") {
  Rng rng(11);
  const Signature sig = test_signature();
  for (int i = 0; i < 2000; ++i) {
    const std::size_t size = 1 + rng() % 3;
    Model m = random_model(sig, size, rng);
    Formula p = testing::random_formula(rng, 4, 0, 3);
    // Open terms too: sub lifts s under binders.
    Term t = testing::random_term(rng, 2);
    Environment e(random_env(rng, 3, size));
    CAPTURE(render_formula(p, PrintStyle::DeepEmbed));
    CAPTURE(render_term(t, PrintStyle::DeepEmbed));
    REQUIRE(eval_formula(e, m, sub(0, t, p)) == eval_formula(e.extend(eval_term(e, m, t)), m, p));
  }
}

TEST_CASE("countermodels falsify") {
  for (const char* text : {"(exists x. P(x)) --> forall x. P(x)", "A --> B", "forall x. R(x, f(x))",
                           "(forall x. exists y. R(x, y)) --> exists y. forall x. R(x, y)"}) {
    Formula f = parse_formula(text);
    auto r = find_countermodel(f);
    CAPTURE(text);
    REQUIRE(r.status == SearchStatus::Found);
    REQUIRE(r.countermodel);
    CHECK_FALSE(eval_formula(r.countermodel->env, r.countermodel->model, f));
    CHECK_FALSE(r.countermodel->sampled);
  }
}

TEST_CASE("first countermodel has the smallest size") {
  auto r = find_countermodel(parse_formula("(exists x. P(x)) --> forall x. P(x)"));
  REQUIRE(r.countermodel);
  CHECK(r.countermodel->model.size() == 2);
}

TEST_CASE("valid formulas have no countermodel") {
  for (const char* text : {"A --> A", "(forall x. P(x)) --> P(a)", "(exists y. forall x. R(x, y)) --> forall x. exists y. R(x, y)",
                           "~~A --> A"}) {
    auto r = find_countermodel(parse_formula(text));
    CAPTURE(text);
    CHECK(r.status == SearchStatus::NotFound);
    CHECK_FALSE(r.countermodel);
  }
}

TEST_CASE("search agrees with the exhaustive oracle") {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    Formula f = testing::random_formula(rng, 3, 0, 1);
    auto r = find_countermodel(f, {.min_size = 1, .max_size = 2, .budget = 1'000'000, .seed = 1});
    auto oracle = testing::exhaustive_falsifier(f, 2);
    CAPTURE(render_formula(f, PrintStyle::Named));
    if (r.status == SearchStatus::BudgetExhausted) continue;
    REQUIRE((r.status == SearchStatus::Found) == oracle.has_value());
    if (oracle) CHECK(r.countermodel->model.size() == oracle->model.size());
  }
}

TEST_CASE("sampling over budget is seeded and sound") {
  // R/2 and f/2 make the size-3 space far larger than the budget.
  Formula f = parse_formula("forall x. forall y. R(x, y) --> R(g(x, y), y)");
  CountermodelOptions o{.min_size = 3, .max_size = 3, .budget = 50, .seed = 99};
  auto r1 = find_countermodel(f, o);
  auto r2 = find_countermodel(f, o);
  REQUIRE(r1.status == SearchStatus::Found);
  CHECK(r1.countermodel->sampled);
  CHECK(r1.countermodel->model == r2.countermodel->model);
  CHECK(r1.interpretations == r2.interpretations);
  CHECK_FALSE(eval_formula(r1.countermodel->env, r1.countermodel->model, f));

  auto valid = find_countermodel(parse_formula("forall x. forall y. R(g(x, y), y) --> R(g(x, y), y)"), o);
  CHECK(valid.status == SearchStatus::BudgetExhausted);
  CHECK(valid.interpretations == 50);
}

TEST_CASE("free variables get an environment") {
  Formula f = Formula::pre("P", {Term::var(1)});
  auto r = find_countermodel(f);
  REQUIRE(r.countermodel);
  CHECK_FALSE(eval_formula(r.countermodel->env, r.countermodel->model, f));
}

TEST_CASE("invalid search options") {
  CHECK_THROWS_AS(find_countermodel(Formula::falsity(), {.min_size = 0}), Error);
  CHECK_THROWS_AS(find_countermodel(Formula::falsity(), {.min_size = 3, .max_size = 2}), Error);
}
