#ifndef LGL_EMAIL_GAME_H_
#define LGL_EMAIL_GAME_H_

#include <string>
#include <vector>

#include "lgl/game.h"
#include "lgl/icr.h"

// Coordinated attack on a circle: a signal starts at position 0 when the
// state is 1, runs around the circle at unit speed and dies at an
// exponentially distributed time.
namespace lgl::email_game {

// Which death interval a player at i with n > 0 signals believes in.
enum class IntervalReading {
  kGeometric,  // (n - 1 + i, n + i), the interval the circle process produces
  kLiteral,    // (n i, n i + 1)
};

struct EmailGameParams {
  double M = 1.0;
  double L = 2.0;
  double pi = 0.5;
  double alpha = 1.0;
  int n_positions = 20;
  int max_signals = 10;
  int buckets_per_unit = 4;
  IntervalReading reading = IntervalReading::kGeometric;
  // When false, L <= M is accepted (only used to exercise the case where
  // contagion stalls).
  bool enforce_payoff_order = true;
};

// Throws std::invalid_argument describing the first bad parameter.
void check_params(const EmailGameParams& p);

// 1/alpha - 1/(e^alpha - 1), with a series for tiny alpha.
double contagion_function(double alpha);

// L / (M + L). Throws std::invalid_argument unless L > M > 0 (or, with
// enforce_order false, unless both are positive).
double risk_dominance_threshold(double M, double L, bool enforce_order = true);

// Probability that the state is 1 given no signal at position i in [0, 1).
double pi_i(const EmailGameParams& p, double i);

struct BeliefTag {
  enum class Kind { kNoSignal, kSignals, kInfinity };
  Kind kind = Kind::kNoSignal;
  int position = 0;  // unused for kInfinity
  int signals = 0;
};

// The generated finite instance together with what each world and belief
// stands for.
struct EmailGameModel {
  GameInstance game;
  std::vector<BeliefTag> tags;       // per belief
  int zero_world = 0;                // state 0
  int infinity_world = 0;            // the signal never dies (truncated tail)
  std::vector<double> cell_lo;       // per world, death-time cell; NaN off cells
  std::vector<double> cell_hi;
  double horizon = 0.0;              // death times beyond this are collapsed

  int no_signal_belief(int position) const;
  // -1 when the (position, signals) belief does not occur.
  int signal_belief(int position, int signals) const;
};

struct EmailGameDerived {
  std::vector<double> pi_i;                          // per position
  std::vector<std::vector<double>> no_signal_beliefs;  // per position
  // n_signal_beliefs[k][n-1] for n = 1..max_signals; empty vector if absent.
  std::vector<std::vector<std::vector<double>>> n_signal_beliefs;
};

EmailGameModel generate_email_game(const EmailGameParams& p);
GameInstance build_email_game(const EmailGameParams& p);
EmailGameDerived derive(const EmailGameParams& p);

// Belief over the worlds of generate_email_game(p).game of the player at
// `position` (index into the positions) after `signal_count` signals.
std::vector<double> conditional_death_probabilities(const EmailGameParams& p, int position,
                                                    int signal_count);

struct FrontRow {
  int round = 0;
  int eliminated_pairs = 0;  // signal pairs where action 1 is gone
  double front_time = 0.0;   // latest reception time among them
  int front_position = -1;
  int front_signals = 0;
};

struct ContagionResult {
  bool all_zero_unique = false;
  double threshold = 0.0;
  double contagion_value = 0.0;
  int rounds = 0;
  int pairs_checked = 0;         // pairs whose belief ignores the tail world
  std::vector<TypePair> retained;  // of those, pairs where action 1 survives
  int tail_pairs_retaining_one = 0;
  std::vector<FrontRow> front;
  icr::IcrResult icr;
};

// Seeds elimination with {0} at every no-signal pair and both actions
// elsewhere, then checks that action 1 dies at every pair whose belief puts
// no mass on the collapsed tail world.
ContagionResult contagion_check(const EmailGameParams& p, const icr::SolverOptions& options = {});
ContagionResult contagion_check(const EmailGameModel& model, const EmailGameParams& p,
                                const icr::SolverOptions& options = {});

}  // namespace lgl::email_game

#endif  // LGL_EMAIL_GAME_H_
