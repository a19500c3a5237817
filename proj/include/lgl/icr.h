#ifndef LGL_ICR_H_
#define LGL_ICR_H_

#include <optional>
#include <string>
#include <vector>

#include "lgl/game.h"
#include "lgl/numerics.h"

namespace lgl::icr {

// A theory of behavior on the registered (characteristic, belief) pairs:
// for every pair a sorted set of allowed actions.
struct BehaviorMap {
  std::vector<TypePair> pairs;          // sorted
  std::vector<std::vector<int>> sets;   // aligned with pairs

  int index_of(TypePair pair) const;    // -1 if the pair is not registered
  const std::vector<int>& at(TypePair pair) const;
  bool allows(TypePair pair, int action) const;

  bool operator==(const BehaviorMap&) const = default;
};

// S_0: every registered pair may play every available action.
BehaviorMap full_availability(const GameInstance& game);

// Empty if every set is a nonempty subset of the availability set and all
// tau-support pairs are covered.
std::string behavior_defect(const GameInstance& game, const BehaviorMap& behavior);

// Pointwise inclusion inner(c,b) subset of outer(c,b).
bool pointwise_subset(const BehaviorMap& inner, const BehaviorMap& outer);

// Per-world conjecture: the aggregate profile others generate at t, and the
// mixture weights when several aggregates are used (exact mode uses one).
struct WorldConjecture {
  int world = 0;
  double weight = 0.0;
  std::vector<AggregateProfile> aggregates;
  std::vector<double> mixture;
};

struct ConjectureWitness {
  std::vector<WorldConjecture> worlds;
};

// Variable layout of the aggregate polytope at one world: for each tau atom
// (c', b') and each action the behavior allows there, one mass variable.
struct PolytopeTemplate {
  struct Cell {
    int atom = 0;           // index into tau(t)
    int characteristic = 0;
    int action = 0;
  };
  numerics::LinearFeasibilityProblem problem;  // equalities only
  std::vector<Cell> cells;                     // aligned with variables

  // The aggregate induced by a point of the polytope.
  AggregateProfile aggregate(const GameInstance& game, const std::vector<double>& point) const;
};

PolytopeTemplate feasible_aggregates_polytope(const GameInstance& game, int world,
                                              const BehaviorMap& behavior);

struct BestReplyResult {
  bool survives = false;
  bool approximate = false;
  std::optional<ConjectureWitness> witness;
};

struct SolverOptions {
  double tol = kDecisionTol;
  // Sampled conjectures per query in blackbox mode.
  int blackbox_samples = 2000;
  unsigned blackbox_seed = 20250611u;
  // 0 means: LGL_THREADS or hardware concurrency.
  int threads = 0;
};

// Is `action` a best reply for (c, beta) to some conjecture under which
// everyone plays according to `behavior`?
BestReplyResult best_reply_feasible(const GameInstance& game, int c, int belief, int action,
                                    const BehaviorMap& behavior,
                                    const SolverOptions& options = {});

// The expected-payoff margins of `action` over every other available action
// at the witness; all of them are >= -tol when the witness is valid.
std::vector<double> witness_margins(const GameInstance& game, int c, int belief, int action,
                                    const ConjectureWitness& witness);

// One round S -> S_D: for every registered pair, the available actions that
// are best replies to some conjecture consistent with `behavior`. Throws
// InternalError when a pair ends up with no surviving action.
BehaviorMap eliminate_round(const GameInstance& game, const BehaviorMap& behavior,
                            const SolverOptions& options = {}, bool* approximate = nullptr);

struct IcrResult {
  BehaviorMap rationalizable;
  int rounds = 0;  // rounds that removed at least one action
  std::vector<BehaviorMap> trace;  // S_0, S_1, ..., fixed point
  bool approximate = false;
};

IcrResult icr_solve(const GameInstance& game, const SolverOptions& options = {});

// Iterates S_{m+1} = S_m intersected with S_D(S_m) from an arbitrary seed.
// With the full availability seed this is icr_solve.
IcrResult icr_solve_from(const GameInstance& game, BehaviorMap seed,
                         const SolverOptions& options = {});

struct SelfRationalizationCheck {
  struct Difference {
    TypePair pair;
    int action = 0;
    bool added = false;  // present in eliminate_round(b) but not in b
  };
  bool is_fixed_point = false;
  // b subset of S_D(b): nothing in b is removed, though ties may add actions.
  // This is the half of the fixed-point property that maximality uses.
  bool is_rationalized = false;
  std::vector<Difference> counterexamples;
};

SelfRationalizationCheck check_self_rationalizing(const GameInstance& game,
                                                  const BehaviorMap& behavior,
                                                  const SolverOptions& options = {});

}  // namespace lgl::icr

#endif  // LGL_ICR_H_
