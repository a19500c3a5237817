#ifndef LGL_EQUILIBRIUM_H_
#define LGL_EQUILIBRIUM_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "lgl/game.h"
#include "lgl/icr.h"

namespace lgl::equilibrium {

// Raised when an argmax set has no lattice max (or min) inside it, which
// means the supermodularity assumptions do not hold for the instance.
class BrokenLatticeArgmax : public std::runtime_error {
 public:
  explicit BrokenLatticeArgmax(const std::string& what) : std::runtime_error(what) {}
};

// Symmetric pure strategy on the registered pairs.
struct StrategyProfile {
  std::vector<TypePair> pairs;   // sorted
  std::vector<int> actions;      // aligned with pairs

  int action_at(TypePair pair) const;
  icr::BehaviorMap as_behavior() const;

  bool operator==(const StrategyProfile&) const = default;
};

StrategyProfile constant_profile(const GameInstance& game, bool top);

struct SupermodularityReport {
  struct Witness {
    int characteristic = 0;
    int state = 0;
    int action = 0;
    int other = 0;
    std::string component;  // "base" or "weight(c',a'')"
    double slack = 0.0;     // negative when violated
  };
  bool supermodular_ok = true;
  bool sublattice_ok = true;
  bool increasing_differences_ok = true;
  bool sampled = false;
  std::vector<Witness> violations;

  bool ok() const { return supermodular_ok && sublattice_ok && increasing_differences_ok; }
};

// Linear mode checks base and every weight column separately, which is
// sufficient for all aggregates. Blackbox mode checks the given samples.
SupermodularityReport check_supermodular(const GameInstance& game,
                                         const std::vector<AggregateProfile>& samples = {});

// Linear mode only: for each c, s and a > a', the difference of weight
// columns must be nondecreasing in the other player's action.
SupermodularityReport check_increasing_differences(const GameInstance& game);

AggregateProfile induced_aggregate(const GameInstance& game, const StrategyProfile& zeta,
                                   int world);

// Expected payoff of every available action for (c, belief) against zeta.
std::vector<double> expected_payoffs(const GameInstance& game, int c, int belief,
                                     const StrategyProfile& zeta);

// Argmax over the availability set, ties within tol included.
std::vector<int> best_response_set(const GameInstance& game, int c, int belief,
                                   const StrategyProfile& zeta, double tol = kDecisionTol);

struct EquilibriumCheck {
  struct Violation {
    TypePair pair;
    int played = 0;
    std::vector<int> best;
    double regret = 0.0;
  };
  bool is_bne = false;
  double max_regret = 0.0;
  std::vector<Violation> violations;
};

EquilibriumCheck verify_equilibrium(const GameInstance& game, const StrategyProfile& zeta,
                                    double tol = kDecisionTol);

enum class Direction { kTop, kBottom };

struct ExtremalOptions {
  bool force = false;  // run even if the assumption validators fail
  double tol = kDecisionTol;
};

class AssumptionFailure : public std::runtime_error {
 public:
  explicit AssumptionFailure(const std::string& what) : std::runtime_error(what) {}
};

struct ExtremalResult {
  StrategyProfile zeta;
  int rounds = 0;
  std::vector<StrategyProfile> trace;
  EquilibriumCheck verification;
};

// Monotone best-response iteration from the top (bottom) of every
// availability set, taking the lattice max (min) of each argmax set.
ExtremalResult extremal_equilibrium(const GameInstance& game, Direction direction,
                                    const ExtremalOptions& options = {});

struct SandwichReport {
  struct Violation {
    TypePair pair;
    int action = 0;
    std::string reason;
  };
  bool ok = false;
  std::vector<Violation> violations;
};

SandwichReport sandwich_check(const GameInstance& game, const icr::BehaviorMap& rationalizable,
                              const StrategyProfile& top, const StrategyProfile& bottom);

// Convenience: solves everything needed for the sandwich check.
SandwichReport sandwich_check(const GameInstance& game, const ExtremalOptions& options = {});

}  // namespace lgl::equilibrium

#endif  // LGL_EQUILIBRIUM_H_
