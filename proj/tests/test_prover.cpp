#include <doctest.h>

#include <mutex>

#include "natded/engine.hpp"
#include "natded/prover.hpp"
#include "natded/semantics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace natded;
using natded::testing::Rng;

namespace {

Formula F(const char* text) { return parse_formula(text); }

Verdict verdict(const char* goal, std::vector<Formula> z = {}, Budget b = {}) {
  return prove(Sequent{std::move(z), F(goal)}, b).verdict;
}

Formula sequent_formula(const Sequent& s) {
  Formula f = s.goal;
  for (auto it = s.assumptions.rbegin(); it != s.assumptions.rend(); ++it) f = Formula::imp(*it, f);
  return f;
}

}  // namespace

TEST_CASE("small verdicts") {
  CHECK(verdict("A | ~A") == Verdict::Proved);
  CHECK(verdict("((P --> Q) --> P) --> P") == Verdict::Proved);
  CHECK(verdict("exists y. R(c'(), y)", {F("forall x. R(x, x)")}) == Verdict::Proved);
  CHECK(verdict("(forall x. P(x)) --> exists x. P(x)") == Verdict::Proved);
  CHECK(verdict("(exists y. forall x. R(x, y)) --> forall x. exists y. R(x, y)") == Verdict::Proved);
  CHECK(verdict("exists x. forall y. P(x) --> P(y)") == Verdict::Proved);
  CHECK(verdict("A(c()) --> forall x. A(x)") != Verdict::Proved);
  CHECK(verdict("falsity") != Verdict::Proved);
  CHECK(verdict("B", {F("A"), F("A --> B")}) == Verdict::Proved);
  CHECK(verdict("Q", {F("falsity")}) == Verdict::Proved);
}

TEST_CASE("non-theorems exhaust the bound") {
  auto v = prove(Sequent{{}, F("(forall x. exists y. R(x, y)) --> exists y. forall x. R(x, y)")},
                 Budget{4, std::chrono::milliseconds(5000)});
  CHECK(v.verdict == Verdict::DepthExhausted);
}

TEST_CASE("timeouts") {
  // A generous bound and almost no time.
  auto v = prove(Sequent{{}, F("(forall x. exists y. R(x, y) & R(y, f(x))) --> exists y. forall x. R(x, y)")},
                 Budget{1000, std::chrono::milliseconds(1)});
  CHECK(v.verdict == Verdict::TimedOut);
}

TEST_CASE("free variables act as constants") {
  Sequent s{{Formula::pre("P", {Term::var(0)})}, Formula::pre("P", {Term::var(0)})};
  CHECK(prove(s).proved());
  Sequent t{{Formula::pre("P", {Term::var(0)})}, Formula::pre("P", {Term::var(1)})};
  CHECK_FALSE(prove(t).proved());
}

TEST_CASE("proved at the smallest bound, deterministic and monotone") {
  const Formula f = F("(forall x. R(x, x)) --> forall x. exists y. R(x, y)");
  auto v = prove(Sequent{{}, f});
  REQUIRE(v.proved());
  CHECK(prove(Sequent{{}, f}) == v);
  for (std::size_t b = v.bound; b <= 10; ++b) CHECK(prove(Sequent{{}, f}, {b, std::chrono::milliseconds(500)}).proved());
  if (v.bound > 0) CHECK_FALSE(prove(Sequent{{}, f}, {v.bound - 1, std::chrono::milliseconds(500)}).proved());
}

TEST_CASE("soundness against the countermodel oracle") {
  Rng rng(61);
  int proved = 0;
  for (int i = 0; i < 300; ++i) {
    Sequent s;
    const std::size_t n = rng() % 3;
    for (std::size_t k = 0; k < n; ++k) s.assumptions.push_back(testing::random_closed_formula(rng, 2));
    s.goal = testing::random_closed_formula(rng, 3);
    auto v = prove(s, {6, std::chrono::milliseconds(200)});
    if (!v.proved()) continue;
    ++proved;
    const Formula f = sequent_formula(s);
    CAPTURE(render_formula(f, PrintStyle::Named));
    REQUIRE_FALSE(testing::exhaustive_falsifier(f, 2));
  }
  MESSAGE(proved << " of 300 proved");
}

TEST_CASE("propositional completeness") {
  Rng rng(67);
  int valid = 0;
  for (int i = 0; i < 3000 && valid < 300; ++i) {
    Formula f = testing::random_propositional(rng, 4);
    if (!testing::tautology(f)) continue;
    ++valid;
    CAPTURE(render_formula(f, PrintStyle::Named));
    REQUIRE(prove(Sequent{{}, f}).proved());
  }
  CHECK(valid >= 100);
}

TEST_CASE("assess") {
  CHECK(assess({}).empty());

  ProofState s = ProofState::new_session(F("(forall x. R(x, x)) --> (forall x. exists y. R(x, y))"));
  s.apply_rule({0, Rule::Imp_I});
  s.apply_rule({1, Rule::Uni_I});
  std::vector<std::pair<std::size_t, Sequent>> leaves;
  for (NodeId id : s.open_leaves()) leaves.push_back({id, Sequent{s.node(id).assumptions, s.node(id).goal}});
  leaves.push_back({99, Sequent{{}, Formula::falsity()}});
  std::size_t seen = 0;
  std::mutex mu;
  auto m = assess(leaves, {}, [&](std::size_t, const FeasibilityVerdict&) {
    std::lock_guard lock(mu);
    ++seen;
  });
  CHECK(seen == leaves.size());
  REQUIRE(m.size() == leaves.size());
  for (NodeId id : s.open_leaves()) CHECK(m.at(id).proved());
  CHECK_FALSE(m.at(99).proved());
}
