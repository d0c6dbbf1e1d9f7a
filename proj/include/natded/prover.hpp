#pragma once

// Free-variable tableau prover used as an advisory feasibility check on
// open subgoals.

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "natded/syntax.hpp"

namespace natded {

struct Sequent {
  std::vector<Formula> assumptions;
  Formula goal = Formula::falsity();
};

struct Budget {
  // Iterative-deepening limit on universal instantiations per branch.
  std::size_t max_bound = 10;
  std::chrono::milliseconds wall_time{500};
};

enum class Verdict { Proved, DepthExhausted, TimedOut };

struct FeasibilityVerdict {
  Verdict verdict = Verdict::DepthExhausted;
  // Bound at which the tableau closed (Proved only).
  std::size_t bound = 0;

  bool proved() const { return verdict == Verdict::Proved; }
  friend bool operator==(const FeasibilityVerdict&, const FeasibilityVerdict&) = default;
};

const char* verdict_name(Verdict v);

// Refutes assumptions ∧ ¬goal. Free de Bruijn variables are treated as
// constants (validity quantifies over every environment).
FeasibilityVerdict prove(const Sequent& s, const Budget& b = {});

using Verdictmap = std::map<std::size_t, FeasibilityVerdict>;

// One prove per leaf, concurrently, each with the full budget. `on_result`
// (optional) sees every verdict as soon as it is available.
Verdictmap assess(const std::vector<std::pair<std::size_t, Sequent>>& leaves, const Budget& b = {},
                  const std::function<void(std::size_t, const FeasibilityVerdict&)>& on_result = {});

}  // namespace natded
