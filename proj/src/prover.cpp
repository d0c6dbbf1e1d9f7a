// Free-variable tableau in the style of Harrison's `tab`: the refutation
// target is put in negation normal form and Skolemized, universals are
// instantiated with fresh metavariables under an iteratively deepened
// bound, and branches close on unifiable complementary literals.

#include "natded/prover.hpp"

#include <future>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace natded {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved:
      return "Proved";
    case Verdict::DepthExhausted:
      return "DepthExhausted";
    case Verdict::TimedOut:
      return "TimedOut";
  }
  return "?";
}

namespace {

struct PTerm;
using TermRef = std::shared_ptr<const PTerm>;

struct PTerm {
  int var = -1;  // >= 0: variable id
  int sym = -1;
  std::vector<TermRef> args;
};

TermRef make_var(int id) {
  auto t = std::make_shared<PTerm>();
  t->var = id;
  return t;
}

TermRef make_fn(int sym, std::vector<TermRef> args) {
  auto t = std::make_shared<PTerm>();
  t->sym = sym;
  t->args = std::move(args);
  return t;
}

enum class PKind { True, False, Lit, And, Or, Forall };

struct PFormula;
using FRef = std::shared_ptr<const PFormula>;

struct PFormula {
  PKind kind = PKind::True;
  bool positive = true;  // Lit
  int sym = -1;          // Lit predicate, Forall variable
  std::vector<TermRef> args;
  FRef lhs, rhs;  // And/Or; Forall body in lhs
};

FRef constant(bool value) {
  static const FRef t = std::make_shared<PFormula>();
  static const FRef f = [] {
    auto p = std::make_shared<PFormula>();
    p->kind = PKind::False;
    return FRef(p);
  }();
  return value ? t : f;
}

FRef make_and(FRef a, FRef b) {
  if (a->kind == PKind::False || b->kind == PKind::False) return constant(false);
  if (a->kind == PKind::True) return b;
  if (b->kind == PKind::True) return a;
  auto f = std::make_shared<PFormula>();
  f->kind = PKind::And;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

FRef make_or(FRef a, FRef b) {
  if (a->kind == PKind::True || b->kind == PKind::True) return constant(true);
  if (a->kind == PKind::False) return b;
  if (b->kind == PKind::False) return a;
  auto f = std::make_shared<PFormula>();
  f->kind = PKind::Or;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

struct Deadline {};

class Tableau {
 public:
  Tableau(const Sequent& s, std::chrono::steady_clock::time_point deadline) : deadline_(deadline) {
    FRef target = constant(true);
    std::vector<TermRef> scope;
    std::vector<int> universals;
    for (const auto& a : s.assumptions) target = make_and(target, convert(a, true, scope, universals));
    target = make_and(target, convert(s.goal, false, scope, universals));
    root_ = target;
  }

  // Closed tableau with at most `bound` instantiations per branch.
  bool refute(std::size_t bound) {
    binding_.clear();
    trail_.clear();
    std::vector<FRef> pending{root_};
    return expand(std::move(pending), {}, static_cast<long>(bound), [](void) { return true; });
  }

 private:
  using Cont = std::function<bool()>;

  int intern(std::unordered_map<std::string, int>& table, const std::string& key) {
    auto [it, inserted] = table.emplace(key, next_symbol_);
    if (inserted) ++next_symbol_;
    return it->second;
  }

  TermRef convert(const Term& t, const std::vector<TermRef>& scope) {
    if (t.is_var()) {
      if (t.index() < scope.size()) return scope[scope.size() - 1 - t.index()];
      return make_fn(intern(functions_, "#" + std::to_string(t.index() - scope.size())), {});
    }
    std::vector<TermRef> args;
    for (const auto& a : t.args()) args.push_back(convert(a, scope));
    return make_fn(intern(functions_, t.name() + "/" + std::to_string(t.args().size())), std::move(args));
  }

  FRef convert(const Formula& f, bool positive, std::vector<TermRef>& scope, std::vector<int>& universals) {
    switch (f.kind()) {
      case Formula::Kind::Falsity:
        return constant(!positive);
      case Formula::Kind::Pre: {
        auto lit = std::make_shared<PFormula>();
        lit->kind = PKind::Lit;
        lit->positive = positive;
        lit->sym = intern(predicates_, f.name() + "/" + std::to_string(f.args().size()));
        for (const auto& a : f.args()) lit->args.push_back(convert(a, scope));
        return lit;
      }
      case Formula::Kind::Imp:
        if (positive) {
          return make_or(convert(f.lhs(), false, scope, universals), convert(f.rhs(), true, scope, universals));
        }
        return make_and(convert(f.lhs(), true, scope, universals), convert(f.rhs(), false, scope, universals));
      case Formula::Kind::Dis:
        if (positive) {
          return make_or(convert(f.lhs(), true, scope, universals), convert(f.rhs(), true, scope, universals));
        }
        return make_and(convert(f.lhs(), false, scope, universals), convert(f.rhs(), false, scope, universals));
      case Formula::Kind::Con:
        if (positive) {
          return make_and(convert(f.lhs(), true, scope, universals), convert(f.rhs(), true, scope, universals));
        }
        return make_or(convert(f.lhs(), false, scope, universals), convert(f.rhs(), false, scope, universals));
      case Formula::Kind::Exi:
      case Formula::Kind::Uni: {
        bool universal = f.is(Formula::Kind::Uni) == positive;
        if (universal) {
          int id = next_var_++;
          scope.push_back(make_var(id));
          universals.push_back(id);
          FRef body = convert(f.body(), positive, scope, universals);
          universals.pop_back();
          scope.pop_back();
          if (body->kind == PKind::True || body->kind == PKind::False) return body;
          auto q = std::make_shared<PFormula>();
          q->kind = PKind::Forall;
          q->sym = id;
          q->lhs = std::move(body);
          return q;
        }
        std::vector<TermRef> args;
        for (int v : universals) args.push_back(make_var(v));
        scope.push_back(make_fn(intern(functions_, "sk" + std::to_string(next_skolem_++)), std::move(args)));
        FRef body = convert(f.body(), positive, scope, universals);
        scope.pop_back();
        return body;
      }
    }
    return constant(true);
  }

  static TermRef replace(const TermRef& t, int var, const TermRef& by) {
    if (t->var == var) return by;
    if (t->var >= 0 || t->args.empty()) return t;
    std::vector<TermRef> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(replace(a, var, by));
    return make_fn(t->sym, std::move(args));
  }

  static FRef replace(const FRef& f, int var, const TermRef& by) {
    switch (f->kind) {
      case PKind::True:
      case PKind::False:
        return f;
      case PKind::Lit: {
        auto lit = std::make_shared<PFormula>(*f);
        for (auto& a : lit->args) a = replace(a, var, by);
        return lit;
      }
      case PKind::And:
      case PKind::Or: {
        auto g = std::make_shared<PFormula>(*f);
        g->lhs = replace(f->lhs, var, by);
        g->rhs = replace(f->rhs, var, by);
        return g;
      }
      case PKind::Forall: {
        auto g = std::make_shared<PFormula>(*f);
        g->lhs = replace(f->lhs, var, by);
        return g;
      }
    }
    return f;
  }

  TermRef deref(TermRef t) const {
    while (t->var >= 0) {
      auto it = binding_.find(t->var);
      if (it == binding_.end()) break;
      t = it->second;
    }
    return t;
  }

  bool occurs(int var, const TermRef& t) const {
    TermRef u = deref(t);
    if (u->var >= 0) return u->var == var;
    for (const auto& a : u->args) {
      if (occurs(var, a)) return true;
    }
    return false;
  }

  void bind(int var, TermRef t) {
    binding_.emplace(var, std::move(t));
    trail_.push_back(var);
  }

  bool unify(const TermRef& a0, const TermRef& b0) {
    TermRef a = deref(a0);
    TermRef b = deref(b0);
    if (a->var >= 0 && b->var >= 0 && a->var == b->var) return true;
    if (a->var >= 0) {
      if (occurs(a->var, b)) return false;
      bind(a->var, b);
      return true;
    }
    if (b->var >= 0) {
      if (occurs(b->var, a)) return false;
      bind(b->var, a);
      return true;
    }
    if (a->sym != b->sym || a->args.size() != b->args.size()) return false;
    for (std::size_t k = 0; k < a->args.size(); ++k) {
      if (!unify(a->args[k], b->args[k])) return false;
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      binding_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  bool complementary(const PFormula& a, const PFormula& b) {
    if (a.positive == b.positive || a.sym != b.sym || a.args.size() != b.args.size()) return false;
    for (std::size_t k = 0; k < a.args.size(); ++k) {
      if (!unify(a.args[k], b.args[k])) return false;
    }
    return true;
  }

  void tick() {
    if ((++steps_ & 0xff) == 0 && std::chrono::steady_clock::now() > deadline_) throw Deadline{};
  }

  // `pending` is a stack: its back is the next formula to expand.
  bool expand(std::vector<FRef> pending, std::vector<FRef> lits, long bound, const Cont& cont) {
    tick();
    if (bound < 0 || pending.empty()) return false;
    FRef f = std::move(pending.back());
    pending.pop_back();
    switch (f->kind) {
      case PKind::True:
        return expand(std::move(pending), std::move(lits), bound, cont);
      case PKind::False:
        return cont();
      case PKind::And:
        pending.push_back(f->rhs);
        pending.push_back(f->lhs);
        return expand(std::move(pending), std::move(lits), bound, cont);
      case PKind::Or: {
        std::vector<FRef> right = pending;
        right.push_back(f->rhs);
        pending.push_back(f->lhs);
        Cont next = [&, right, lits]() { return expand(right, lits, bound, cont); };
        return expand(std::move(pending), lits, bound, next);
      }
      case PKind::Forall: {
        FRef instance = replace(f->lhs, f->sym, make_var(next_var_++));
        pending.insert(pending.begin(), f);
        pending.push_back(std::move(instance));
        return expand(std::move(pending), std::move(lits), bound - 1, cont);
      }
      case PKind::Lit: {
        for (const auto& l : lits) {
          std::size_t mark = trail_.size();
          if (complementary(*f, *l) && cont()) return true;
          undo_to(mark);
        }
        lits.push_back(f);
        return expand(std::move(pending), std::move(lits), bound, cont);
      }
    }
    return false;
  }

  std::chrono::steady_clock::time_point deadline_;
  std::unordered_map<std::string, int> functions_;
  std::unordered_map<std::string, int> predicates_;
  int next_symbol_ = 0;
  int next_var_ = 0;
  int next_skolem_ = 0;
  std::unordered_map<int, TermRef> binding_;
  std::vector<int> trail_;
  std::uint64_t steps_ = 0;
  FRef root_;
};

}  // namespace

FeasibilityVerdict prove(const Sequent& s, const Budget& b) {
  auto deadline = std::chrono::steady_clock::now() + b.wall_time;
  try {
    Tableau tableau(s, deadline);
    for (std::size_t bound = 0; bound <= b.max_bound; ++bound) {
      if (tableau.refute(bound)) return FeasibilityVerdict{Verdict::Proved, bound};
    }
  } catch (const Deadline&) {
    return FeasibilityVerdict{Verdict::TimedOut, 0};
  }
  return FeasibilityVerdict{Verdict::DepthExhausted, 0};
}

Verdictmap assess(const std::vector<std::pair<std::size_t, Sequent>>& leaves, const Budget& b,
                  const std::function<void(std::size_t, const FeasibilityVerdict&)>& on_result) {
  std::mutex mu;
  Verdictmap out;
  std::vector<std::future<void>> jobs;
  jobs.reserve(leaves.size());
  for (const auto& [id, sequent] : leaves) {
    jobs.push_back(std::async(std::launch::async, [&, id = id, &sequent = sequent] {
      FeasibilityVerdict v = prove(sequent, b);
      std::lock_guard<std::mutex> lock(mu);
      out[id] = v;
      if (on_result) on_result(id, v);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace natded
