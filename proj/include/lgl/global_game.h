#ifndef LGL_GLOBAL_GAME_H_
#define LGL_GLOBAL_GAME_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lgl/game.h"

// Binary-action investment games with payoff a * (s + theta - 1), where theta
// is the mass of investors. Characteristics play no role: the module requires
// a single characteristic.
namespace lgl::global_game {

// Sorted belief ids.
using BeliefSet = std::vector<int>;

BeliefSet all_beliefs(const GameInstance& game);

struct BeliefStatistics {
  std::vector<double> x;     // expected state per belief
  std::vector<double> rank;  // expected share of weakly less optimistic players
  // expected_population[b][b2]: mass that belief b expects on belief b2.
  std::vector<std::vector<double>> expected_population;

  int size() const { return static_cast<int>(x.size()); }
  // F_b(E): expected share of players whose belief lies in E.
  double share(int belief, const BeliefSet& set) const;
};

// Throws std::invalid_argument for |C| != 1 or states without numeric values
// in [-1, 2].
BeliefStatistics compute_statistics(const GameInstance& game);

BeliefSet urb_set(const BeliefStatistics& stats, double eps);
BeliefSet srd_set(const BeliefStatistics& stats, double eps);
BeliefSet nsrd_set(const BeliefStatistics& stats, double eps);

// Threshold f(b) for the belief operator: a constant, x_b, or 1 - x_b.
struct Threshold {
  enum class Kind { kConstant, kExpectedState, kOneMinusExpectedState };
  Kind kind = Kind::kConstant;
  double p = 0.0;

  static Threshold constant(double p) { return {Kind::kConstant, p}; }
  static Threshold x() { return {Kind::kExpectedState, 0.0}; }
  static Threshold one_minus_x() { return {Kind::kOneMinusExpectedState, 0.0}; }
  double at(const BeliefStatistics& stats, int belief) const;
};

// {b in E : F_b(E) >= f(b) - tol}. The tolerance matches the decision
// tolerance of the generic solvers so the two agree on ties.
BeliefSet belief_operator(const BeliefStatistics& stats, const Threshold& f, const BeliefSet& set,
                          double tol = kDecisionTol);

struct CertaintyResult {
  BeliefSet set;
  int iterations = 0;  // operator applications, including the confirming one
};

CertaintyResult certainty_operator(const BeliefStatistics& stats, const Threshold& f,
                                   const BeliefSet& set, double tol = kDecisionTol);

struct Thresholds {
  double x_upper = 0.0;  // sup{x_b : b in E, x_b <= R(b) + eps}
  double x_lower = 0.0;  // inf{x_b : b in E, x_b >= R(b) - eps}
  bool upper_empty = true;
  bool lower_empty = true;
};

Thresholds x_thresholds(const BeliefStatistics& stats, double eps, const BeliefSet& set);

struct AssumptionsReport {
  bool closedness_vacuous = true;  // always: the registry is finite
  bool fixed_point_ok = false;     // B_{1-eps}(E) == E for E = C_{1-eps}(URB_eps)
  bool premise_ok = false;         // E subset of B_p(E) with p = 1 - eps
  bool threshold_chain_ok = false; // x**_eps(E) <= x**_eps(URB_eps) <= 1/2 + 2 eps
  double x_upper_certified = 0.0;  // x**_eps(E)
  double x_upper_urb = 0.0;        // x**_eps(URB_eps)
  double x_lower_certified = 0.0;  // x^eps_**(E)
  std::vector<std::string> notes;
};

struct UniquenessCertificate {
  double eps = 0.0;
  BeliefSet urb;
  BeliefSet certain_urb;           // C_{1-eps}(URB_eps)
  BeliefSet invest_region;         // SRD_{2 eps} within certain_urb
  BeliefSet noninvest_region;      // nSRD_{2 eps} within certain_urb
  AssumptionsReport assumptions;
};

UniquenessCertificate uniqueness_certificate(const GameInstance& game, double eps);

// Beliefs at which investing (not investing) is consistent with some
// rationalizable play: C_{1-x} and C_x of the full registry.
BeliefSet invest_possible(const BeliefStatistics& stats);
BeliefSet noninvest_possible(const BeliefStatistics& stats);

// Finite description of an investment game; build_game turns it into a
// GameInstance with one state per world and every belief registered.
struct GlobalGameSpec {
  std::string name = "global-game";
  std::vector<double> world_states;
  // world -> (belief, mass) population
  std::vector<std::vector<std::pair<int, double>>> populations;
  // belief -> probability vector over worlds
  std::vector<std::vector<double>> beliefs;
};

GameInstance build_game(const GlobalGameSpec& spec);

// Everyone is commonly certain of their own world: belief k is a point mass
// on world k, whose population is belief k alone.
GlobalGameSpec common_certainty_spec(const std::vector<double>& states);

// All worlds share one population spread evenly over the beliefs; belief k
// is a point mass on world k. Ranks climb 1/n, 2/n, ..., 1.
GlobalGameSpec rank_ladder_spec(const std::vector<double>& states);

// Discretized noisy-signal model: `signals` beliefs, each uniform over the
// `window` worlds whose populations contain it; world j holds beliefs
// j..j+window-1 in equal shares. States rise linearly from lo to hi.
GlobalGameSpec window_spec(int signals, int window, double lo, double hi);

// Random instance with at most `max_worlds` worlds and `max_beliefs`
// beliefs; each world and belief has a small random support.
GlobalGameSpec random_spec(std::uint64_t seed, int max_worlds, int max_beliefs);

}  // namespace lgl::global_game

#endif  // LGL_GLOBAL_GAME_H_
