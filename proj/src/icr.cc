#include "lgl/icr.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "lgl/parallel.h"

namespace lgl::icr {

int BehaviorMap::index_of(TypePair pair) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), pair);
  if (it == pairs.end() || *it != pair) return -1;
  return static_cast<int>(it - pairs.begin());
}

const std::vector<int>& BehaviorMap::at(TypePair pair) const {
  const int i = index_of(pair);
  if (i < 0) throw std::out_of_range("BehaviorMap: pair is not registered");
  return sets[i];
}

bool BehaviorMap::allows(TypePair pair, int action) const {
  const auto& set = at(pair);
  return std::binary_search(set.begin(), set.end(), action);
}

BehaviorMap full_availability(const GameInstance& game) {
  BehaviorMap b;
  b.pairs = registered_pairs(game);
  for (const auto& p : b.pairs) b.sets.push_back(game.availability[p.characteristic]);
  return b;
}

std::string behavior_defect(const GameInstance& game, const BehaviorMap& b) {
  if (b.pairs.size() != b.sets.size()) return "pairs and sets differ in length";
  if (!std::is_sorted(b.pairs.begin(), b.pairs.end())) return "pairs are not sorted";
  for (size_t i = 0; i < b.pairs.size(); ++i) {
    const auto& set = b.sets[i];
    if (set.empty()) return "empty behavior set";
    for (int a : set) {
      if (!game.available(b.pairs[i].characteristic, a)) return "behavior allows an unavailable action";
    }
    if (!std::is_sorted(set.begin(), set.end())) return "behavior set not sorted";
  }
  for (const auto& p : registered_pairs(game)) {
    if (b.index_of(p) < 0) return "a registered pair is missing from the behavior map";
  }
  return {};
}

bool pointwise_subset(const BehaviorMap& inner, const BehaviorMap& outer) {
  for (size_t i = 0; i < inner.pairs.size(); ++i) {
    const int j = outer.index_of(inner.pairs[i]);
    if (j < 0) return false;
    if (!std::includes(outer.sets[j].begin(), outer.sets[j].end(), inner.sets[i].begin(),
                       inner.sets[i].end())) {
      return false;
    }
  }
  return true;
}

AggregateProfile PolytopeTemplate::aggregate(const GameInstance& game,
                                             const std::vector<double>& point) const {
  AggregateProfile mu(game.num_characteristics(), game.num_actions());
  for (size_t k = 0; k < cells.size(); ++k) mu.at(cells[k].characteristic, cells[k].action) += point[k];
  return mu;
}

PolytopeTemplate feasible_aggregates_polytope(const GameInstance& game, int world,
                                              const BehaviorMap& behavior) {
  PolytopeTemplate poly;
  const auto& population = game.type_space.tau.at(world);
  for (int k = 0; k < static_cast<int>(population.size()); ++k) {
    const auto& atom = population[k];
    numerics::LinearRow row;
    row.rhs = atom.mass;
    for (int a : behavior.at({atom.characteristic, atom.belief})) {
      const int var = poly.problem.add_variable(0.0, atom.mass);
      poly.cells.push_back({k, atom.characteristic, a});
      row.coeffs.emplace_back(var, 1.0);
    }
    poly.problem.add_equality(std::move(row));
  }
  return poly;
}

namespace {

// Atoms of tau(t) that are indistinguishable for payoffs: same
// characteristic and same allowed action set. Their masses add up.
struct Group {
  int characteristic = 0;
  std::vector<int> actions;
  double mass = 0.0;
};

using WorldGroups = std::vector<std::vector<Group>>;

WorldGroups group_worlds(const GameInstance& game, const BehaviorMap& behavior) {
  WorldGroups out(game.num_worlds());
  for (int t = 0; t < game.num_worlds(); ++t) {
    std::map<std::pair<int, std::vector<int>>, double> merged;
    for (const auto& atom : game.type_space.tau[t]) {
      if (atom.mass <= 0.0) continue;
      merged[{atom.characteristic, behavior.at({atom.characteristic, atom.belief})}] += atom.mass;
    }
    for (auto& [key, mass] : merged) out[t].push_back({key.first, key.second, mass});
  }
  return out;
}

std::vector<int> support(const Belief& belief) {
  std::vector<int> worlds;
  for (int t = 0; t < static_cast<int>(belief.probs.size()); ++t)
    if (belief.probs[t] > 0.0) worlds.push_back(t);
  return worlds;
}

// Payoff difference coefficients of `action` over `rival` for a player of
// characteristic c in state s.
struct Difference {
  const PayoffOracle& p;
  int c, action, rival;

  double constant(int s) const { return p.base(c, action, s) - p.base(c, rival, s); }
  double slope(int s, int c2, int a2) const {
    return p.weight(c, action, s, c2, a2) - p.weight(c, rival, s, c2, a2);
  }
};

ConjectureWitness witness_from_choice(const GameInstance& game, const Belief& belief,
                                      const std::vector<int>& worlds, const WorldGroups& groups,
                                      const std::vector<std::vector<std::vector<double>>>& split) {
  ConjectureWitness w;
  for (size_t i = 0; i < worlds.size(); ++i) {
    const int t = worlds[i];
    AggregateProfile mu(game.num_characteristics(), game.num_actions());
    for (size_t g = 0; g < groups[t].size(); ++g) {
      const auto& group = groups[t][g];
      for (size_t k = 0; k < group.actions.size(); ++k) {
        mu.at(group.characteristic, group.actions[k]) += split[i][g][k];
      }
    }
    w.worlds.push_back({t, belief.probs[t], {std::move(mu)}, {1.0}});
  }
  return w;
}

BestReplyResult single_rival(const GameInstance& game, int c, int action, int rival,
                             const Belief& belief, const std::vector<int>& worlds,
                             const WorldGroups& groups, double tol, bool want_witness) {
  const Difference diff{game.payoff, c, action, rival};
  double margin = 0.0;
  std::vector<std::vector<std::vector<double>>> split(want_witness ? worlds.size() : 0);
  for (size_t i = 0; i < worlds.size(); ++i) {
    const int t = worlds[i];
    const int s = game.type_space.sigma[t];
    double value = diff.constant(s);
    for (const auto& group : groups[t]) {
      size_t best = 0;
      double best_slope = -numerics::kInfinity;
      for (size_t k = 0; k < group.actions.size(); ++k) {
        const double slope = diff.slope(s, group.characteristic, group.actions[k]);
        if (slope > best_slope) {
          best_slope = slope;
          best = k;
        }
      }
      value += best_slope * group.mass;
      if (!want_witness) continue;
      std::vector<double> masses(group.actions.size(), 0.0);
      masses[best] = group.mass;
      split[i].push_back(std::move(masses));
    }
    margin += belief.probs[t] * value;
  }
  BestReplyResult result;
  result.survives = margin >= -tol;
  if (result.survives && want_witness) result.witness = witness_from_choice(game, belief, worlds, groups, split);
  return result;
}

BestReplyResult linear_program(const GameInstance& game, int c, int action,
                               const std::vector<int>& rivals, const Belief& belief,
                               const std::vector<int>& worlds, const WorldGroups& groups,
                               double tol) {
  numerics::LinearFeasibilityProblem lp;
  // var_of[i][g][k]: variable index, or -1 for a group with a single action.
  std::vector<std::vector<std::vector<int>>> var_of(worlds.size());
  for (size_t i = 0; i < worlds.size(); ++i) {
    for (const auto& group : groups[worlds[i]]) {
      std::vector<int> vars(group.actions.size(), -1);
      if (group.actions.size() > 1) {
        numerics::LinearRow row;
        row.rhs = group.mass;
        for (auto& v : vars) {
          v = lp.add_variable(0.0, group.mass);
          row.coeffs.emplace_back(v, 1.0);
        }
        lp.add_equality(std::move(row));
      }
      var_of[i].push_back(std::move(vars));
    }
  }
  for (int rival : rivals) {
    const Difference diff{game.payoff, c, action, rival};
    numerics::LinearRow row;
    double constant = 0.0;
    for (size_t i = 0; i < worlds.size(); ++i) {
      const int t = worlds[i];
      const int s = game.type_space.sigma[t];
      const double w = belief.probs[t];
      constant += w * diff.constant(s);
      for (size_t g = 0; g < groups[t].size(); ++g) {
        const auto& group = groups[t][g];
        for (size_t k = 0; k < group.actions.size(); ++k) {
          const double coeff = w * diff.slope(s, group.characteristic, group.actions[k]);
          if (var_of[i][g][k] < 0) {
            constant += coeff * group.mass;
          } else if (coeff != 0.0) {
            row.coeffs.emplace_back(var_of[i][g][k], coeff);
          }
        }
      }
    }
    row.rhs = -constant;
    lp.add_at_least(std::move(row));
  }
  const auto solved = numerics::solve_feasibility(lp, tol);
  BestReplyResult result;
  result.survives = solved.feasible;
  if (!solved.feasible) return result;
  std::vector<std::vector<std::vector<double>>> split(worlds.size());
  for (size_t i = 0; i < worlds.size(); ++i) {
    const auto& gs = groups[worlds[i]];
    for (size_t g = 0; g < gs.size(); ++g) {
      std::vector<double> masses(gs[g].actions.size(), 0.0);
      for (size_t k = 0; k < masses.size(); ++k) {
        const int v = var_of[i][g][k];
        masses[k] = v < 0 ? gs[g].mass : solved.point[v];
      }
      split[i].push_back(std::move(masses));
    }
  }
  result.witness = witness_from_choice(game, belief, worlds, groups, split);
  return result;
}

BestReplyResult sampled(const GameInstance& game, int c, int belief_id, int action,
                        const std::vector<int>& worlds, const WorldGroups& groups,
                        const SolverOptions& options) {
  const Belief& belief = game.beliefs[belief_id];
  std::seed_seq seq{options.blackbox_seed, static_cast<unsigned>(c),
                    static_cast<unsigned>(belief_id), static_cast<unsigned>(action)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& available = game.availability[c];

  BestReplyResult result;
  result.approximate = true;
  for (int sample = 0; sample < options.blackbox_samples; ++sample) {
    std::vector<std::vector<std::vector<double>>> split(worlds.size());
    for (size_t i = 0; i < worlds.size(); ++i) {
      for (const auto& group : groups[worlds[i]]) {
        std::vector<double> masses(group.actions.size(), 0.0);
        // First sample: everyone at the lowest allowed action; then alternate
        // between vertices and interior points.
        if (sample == 0) {
          masses[0] = group.mass;
        } else if (sample % 2 == 1) {
          masses[rng() % masses.size()] = group.mass;
        } else {
          double total = 0.0;
          for (auto& m : masses) total += (m = -std::log(1.0 - unit(rng)));
          for (auto& m : masses) m *= group.mass / total;
        }
        split[i].push_back(std::move(masses));
      }
    }
    auto witness = witness_from_choice(game, belief, worlds, groups, split);
    std::vector<double> payoff(game.num_actions(), 0.0);
    for (int a : available) {
      for (const auto& wc : witness.worlds) {
        payoff[a] += wc.weight * eval_payoff(game, c, a, game.type_space.sigma[wc.world],
                                             wc.aggregates.front());
      }
    }
    double best = -numerics::kInfinity;
    for (int a : available) best = std::max(best, payoff[a]);
    if (payoff[action] >= best - options.tol) {
      result.survives = true;
      result.witness = std::move(witness);
      return result;
    }
  }
  return result;
}

BestReplyResult best_reply_with_groups(const GameInstance& game, int c, int belief_id, int action,
                                       const WorldGroups& groups, const SolverOptions& options,
                                       bool want_witness) {
  if (!game.available(c, action)) {
    throw UnavailableAction("action " + game.actions.label(action) + " is not available to " +
                            game.characteristics.labels[c]);
  }
  const Belief& belief = game.beliefs.at(belief_id);
  const auto worlds = support(belief);
  if (!game.payoff.is_linear()) return sampled(game, c, belief_id, action, worlds, groups, options);

  std::vector<int> rivals;
  for (int a : game.availability[c])
    if (a != action) rivals.push_back(a);
  if (rivals.empty()) {
    // No alternative: any consistent conjecture is a witness.
    std::vector<std::vector<std::vector<double>>> split(worlds.size());
    for (size_t i = 0; i < worlds.size(); ++i) {
      for (const auto& group : groups[worlds[i]]) {
        std::vector<double> masses(group.actions.size(), 0.0);
        masses[0] = group.mass;
        split[i].push_back(std::move(masses));
      }
    }
    BestReplyResult result;
    result.survives = true;
    result.witness = witness_from_choice(game, belief, worlds, groups, split);
    return result;
  }
  if (rivals.size() == 1) {
    return single_rival(game, c, action, rivals.front(), belief, worlds, groups, options.tol,
                        want_witness);
  }
  return linear_program(game, c, action, rivals, belief, worlds, groups, options.tol);
}

}  // namespace

BestReplyResult best_reply_feasible(const GameInstance& game, int c, int belief, int action,
                                    const BehaviorMap& behavior, const SolverOptions& options) {
  return best_reply_with_groups(game, c, belief, action, group_worlds(game, behavior), options,
                                true);
}

std::vector<double> witness_margins(const GameInstance& game, int c, int belief, int action,
                                    const ConjectureWitness& witness) {
  (void)belief;
  std::vector<double> margins;
  for (int rival : game.availability[c]) {
    if (rival == action) continue;
    double margin = 0.0;
    for (const auto& wc : witness.worlds) {
      const int s = game.type_space.sigma[wc.world];
      for (size_t k = 0; k < wc.aggregates.size(); ++k) {
        const double mix = wc.mixture.empty() ? 1.0 : wc.mixture[k];
        margin += wc.weight * mix *
                  (eval_payoff(game, c, action, s, wc.aggregates[k]) -
                   eval_payoff(game, c, rival, s, wc.aggregates[k]));
      }
    }
    margins.push_back(margin);
  }
  return margins;
}

BehaviorMap eliminate_round(const GameInstance& game, const BehaviorMap& behavior,
                            const SolverOptions& options, bool* approximate) {
  const auto groups = group_worlds(game, behavior);
  BehaviorMap next;
  next.pairs = behavior.pairs;
  next.sets.resize(behavior.pairs.size());
  std::vector<char> approx(behavior.pairs.size(), 0);
  parallel_for(static_cast<int>(behavior.pairs.size()), options.threads, [&](int i) {
    const auto [c, b] = behavior.pairs[i];
    for (int a : game.availability[c]) {
      const auto r = best_reply_with_groups(game, c, b, a, groups, options, false);
      if (r.approximate) approx[i] = 1;
      if (r.survives) next.sets[i].push_back(a);
    }
  });
  for (size_t i = 0; i < next.sets.size(); ++i) {
    if (next.sets[i].empty()) {
      const auto [c, b] = next.pairs[i];
      throw InternalError("EmptySurvivors: no best reply survives at (" +
                          game.characteristics.labels[c] + ", " + game.beliefs[b].label + ")");
    }
  }
  if (approximate) {
    *approximate = std::any_of(approx.begin(), approx.end(), [](char x) { return x != 0; });
  }
  return next;
}

IcrResult icr_solve_from(const GameInstance& game, BehaviorMap seed, const SolverOptions& options) {
  if (auto defect = behavior_defect(game, seed); !defect.empty()) {
    throw std::invalid_argument("icr_solve: " + defect);
  }
  long long budget = 0;
  for (const auto& set : seed.sets) budget += static_cast<long long>(set.size()) - 1;

  IcrResult result;
  result.trace.push_back(seed);
  BehaviorMap current = std::move(seed);
  while (true) {
    bool approx = false;
    BehaviorMap replies = eliminate_round(game, current, options, &approx);
    result.approximate = result.approximate || approx;
    BehaviorMap next;
    next.pairs = current.pairs;
    next.sets.resize(current.pairs.size());
    for (size_t i = 0; i < current.sets.size(); ++i) {
      std::set_intersection(current.sets[i].begin(), current.sets[i].end(),
                            replies.sets[i].begin(), replies.sets[i].end(),
                            std::back_inserter(next.sets[i]));
      if (next.sets[i].empty()) {
        const auto [c, b] = current.pairs[i];
        throw InternalError("EmptySurvivors: seeded elimination emptied (" +
                            game.characteristics.labels[c] + ", " + game.beliefs[b].label + ")");
      }
    }
    if (next == current) break;
    ++result.rounds;
    if (result.rounds > budget) throw InternalError("icr_solve: round budget exceeded");
    result.trace.push_back(next);
    current = std::move(next);
  }
  result.rationalizable = std::move(current);
  return result;
}

IcrResult icr_solve(const GameInstance& game, const SolverOptions& options) {
  return icr_solve_from(game, full_availability(game), options);
}

SelfRationalizationCheck check_self_rationalizing(const GameInstance& game,
                                                  const BehaviorMap& behavior,
                                                  const SolverOptions& options) {
  const auto next = eliminate_round(game, behavior, options);
  SelfRationalizationCheck check;
  for (size_t i = 0; i < behavior.pairs.size(); ++i) {
    const auto& before = behavior.sets[i];
    const auto& after = next.sets[i];
    for (int a : after)
      if (!std::binary_search(before.begin(), before.end(), a))
        check.counterexamples.push_back({behavior.pairs[i], a, true});
    for (int a : before)
      if (!std::binary_search(after.begin(), after.end(), a))
        check.counterexamples.push_back({behavior.pairs[i], a, false});
  }
  check.is_fixed_point = check.counterexamples.empty();
  check.is_rationalized = std::none_of(check.counterexamples.begin(), check.counterexamples.end(),
                                       [](const auto& d) { return !d.added; });
  return check;
}

}  // namespace lgl::icr
