#ifndef LGL_GAME_H_
#define LGL_GAME_H_

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgl/order.h"

namespace lgl {

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kDecisionTol = 1e-9;

class UnavailableAction : public std::invalid_argument {
 public:
  explicit UnavailableAction(const std::string& what) : std::invalid_argument(what) {}
};

// Signals a broken solver contract (tolerance failure or a bug), never bad
// user input.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

struct CharacteristicSpace {
  std::vector<std::string> labels;
  std::vector<double> nu;

  int size() const { return static_cast<int>(labels.size()); }
};

// Finite action lattice. Join and meet tables are derived from the order.
struct ActionLattice {
  order::FinitePoset poset;
  std::vector<std::vector<int>> join_table;
  std::vector<std::vector<int>> meet_table;
  int top = -1;
  int bottom = -1;

  int size() const { return poset.size(); }
  const std::string& label(int a) const { return poset.elements[a]; }
  bool le(int a, int b) const { return poset.le(a, b); }
  int join(int a, int b) const { return join_table[a][b]; }
  int meet(int a, int b) const { return meet_table[a][b]; }

  // Throws std::invalid_argument if the poset is not a lattice.
  static ActionLattice from_poset(order::FinitePoset poset);
  static ActionLattice chain(std::vector<std::string> labels);
};

struct StateSpace {
  std::vector<std::string> labels;
  std::optional<std::vector<double>> values;

  int size() const { return static_cast<int>(labels.size()); }
};

struct TauAtom {
  int characteristic = 0;
  int belief = 0;
  double mass = 0.0;
};

struct TypeSpace {
  std::vector<std::string> worlds;
  std::vector<int> sigma;                   // world -> state
  std::vector<std::vector<TauAtom>> tau;    // world -> population

  int num_worlds() const { return static_cast<int>(worlds.size()); }
};

// One element of the belief registry: a probability vector over worlds.
struct Belief {
  std::string label;
  std::vector<double> probs;
};

// Element of Delta_nu(C x A), stored densely as mass[c * num_actions + a].
class AggregateProfile {
 public:
  AggregateProfile() = default;
  AggregateProfile(int num_characteristics, int num_actions)
      : num_c_(num_characteristics), num_a_(num_actions),
        mass_(static_cast<size_t>(num_characteristics) * num_actions, 0.0) {}

  double& at(int c, int a) { return mass_[static_cast<size_t>(c) * num_a_ + a]; }
  double at(int c, int a) const { return mass_[static_cast<size_t>(c) * num_a_ + a]; }
  int num_characteristics() const { return num_c_; }
  int num_actions() const { return num_a_; }
  const std::vector<double>& raw() const { return mass_; }

  // Total mass on action a across characteristics.
  double action_mass(int a) const;

  bool operator==(const AggregateProfile&) const = default;

 private:
  int num_c_ = 0;
  int num_a_ = 0;
  std::vector<double> mass_;
};

// Payoff v(c, a, s, mu). Linear mode is exactly affine in mu:
//   base(c,a,s) + sum_{c',a'} weight(c,a,s,c',a') * mu(c',a').
struct PayoffOracle {
  enum class Mode { kLinear, kBlackbox };
  using Evaluator = std::function<double(int c, int a, int s, const AggregateProfile& mu)>;

  Mode mode = Mode::kLinear;
  int num_c = 0;
  int num_a = 0;
  int num_s = 0;
  std::vector<double> base_values;
  std::vector<double> weight_values;
  Evaluator evaluator;

  static PayoffOracle linear(int num_c, int num_a, int num_s);
  static PayoffOracle blackbox(int num_c, int num_a, int num_s, Evaluator evaluator);

  bool is_linear() const { return mode == Mode::kLinear; }
  double& base(int c, int a, int s) { return base_values[base_index(c, a, s)]; }
  double base(int c, int a, int s) const { return base_values[base_index(c, a, s)]; }
  double& weight(int c, int a, int s, int c2, int a2) {
    return weight_values[weight_index(c, a, s, c2, a2)];
  }
  double weight(int c, int a, int s, int c2, int a2) const {
    return weight_values[weight_index(c, a, s, c2, a2)];
  }

 private:
  size_t base_index(int c, int a, int s) const {
    return (static_cast<size_t>(c) * num_a + a) * num_s + s;
  }
  size_t weight_index(int c, int a, int s, int c2, int a2) const {
    return ((base_index(c, a, s) * num_c) + c2) * num_a + a2;
  }
};

// A (characteristic, belief) pair at which behavior is defined.
struct TypePair {
  int characteristic = 0;
  int belief = 0;

  auto operator<=>(const TypePair&) const = default;
};

struct GameInstance {
  std::string name;
  CharacteristicSpace characteristics;
  ActionLattice actions;
  std::vector<std::vector<int>> availability;  // sorted action indices per c
  StateSpace states;
  TypeSpace type_space;
  std::vector<Belief> beliefs;
  PayoffOracle payoff;
  // Pairs registered in addition to the support of tau.
  std::vector<TypePair> queries;

  int num_characteristics() const { return characteristics.size(); }
  int num_actions() const { return actions.size(); }
  int num_states() const { return states.size(); }
  int num_worlds() const { return type_space.num_worlds(); }
  int num_beliefs() const { return static_cast<int>(beliefs.size()); }
  bool available(int c, int a) const;
  // Lattice max / min of the availability set of c.
  int top_available(int c) const;
  int bottom_available(int c) const;
};

// Sorted, deduplicated union of the tau supports and the queries.
std::vector<TypePair> registered_pairs(const GameInstance& game);

struct Violation {
  std::string code;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool usable() const { return violations.empty(); }
  bool has(const std::string& code) const;
};

struct ValidationOptions {
  // Require every availability set to be a sublattice.
  bool supermodular = false;
};

ValidationReport validate_game(const GameInstance& game, const ValidationOptions& options = {});

// Empty when mu lies in Delta_nu(C x A) on the graph of the availability map.
std::string aggregate_defect(const GameInstance& game, const AggregateProfile& mu);

double eval_payoff(const GameInstance& game, int c, int a, int s, const AggregateProfile& mu);

struct ConjectureAtom {
  double weight = 0.0;
  int state = 0;
  AggregateProfile aggregate;
};

// Expected payoff sum_k weight_k * v(c, a, s_k, mu_k) of a finite conjecture.
double conjecture_payoff(const GameInstance& game, int c, int a,
                         std::span<const ConjectureAtom> conjecture);

}  // namespace lgl

#endif  // LGL_GAME_H_
