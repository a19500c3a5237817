#include "lgl/equilibrium.h"

#include <algorithm>
#include <sstream>

#include "lgl/parallel.h"

namespace lgl::equilibrium {

int StrategyProfile::action_at(TypePair pair) const {
  auto it = std::lower_bound(pairs.begin(), pairs.end(), pair);
  if (it == pairs.end() || *it != pair) throw std::out_of_range("StrategyProfile: unknown pair");
  return actions[it - pairs.begin()];
}

icr::BehaviorMap StrategyProfile::as_behavior() const {
  icr::BehaviorMap b;
  b.pairs = pairs;
  for (int a : actions) b.sets.push_back({a});
  return b;
}

StrategyProfile constant_profile(const GameInstance& game, bool top) {
  StrategyProfile zeta;
  zeta.pairs = registered_pairs(game);
  for (const auto& p : zeta.pairs) {
    zeta.actions.push_back(top ? game.top_available(p.characteristic)
                               : game.bottom_available(p.characteristic));
  }
  return zeta;
}

namespace {

constexpr double kValidatorTol = 1e-12;

bool comparable(const ActionLattice& lat, int a, int b) { return lat.le(a, b) || lat.le(b, a); }

std::string column_name(const GameInstance& g, int c2, int a2) {
  return "weight(" + g.characteristics.labels[c2] + "," + g.actions.label(a2) + ")";
}

}  // namespace

SupermodularityReport check_supermodular(const GameInstance& g,
                                         const std::vector<AggregateProfile>& samples) {
  SupermodularityReport report;
  const auto& lat = g.actions;
  for (int c = 0; c < g.num_characteristics(); ++c) {
    const auto& set = g.availability[c];
    for (int a : set)
      for (int b : set)
        if (!g.available(c, lat.join(a, b)) || !g.available(c, lat.meet(a, b))) {
          report.sublattice_ok = false;
          report.violations.push_back({c, 0, a, b, "sublattice", -1.0});
        }
  }
  if (!report.sublattice_ok) return report;

  const auto& p = g.payoff;
  report.sampled = !p.is_linear();
  for (int c = 0; c < g.num_characteristics(); ++c) {
    const auto& set = g.availability[c];
    for (size_t i = 0; i < set.size(); ++i) {
      for (size_t k = i + 1; k < set.size(); ++k) {
        const int a = set[i], b = set[k];
        if (comparable(lat, a, b)) continue;
        const int j = lat.join(a, b), m = lat.meet(a, b);
        for (int s = 0; s < g.num_states(); ++s) {
          auto record = [&](const std::string& what, double slack) {
            if (slack < -kValidatorTol) {
              report.supermodular_ok = false;
              report.violations.push_back({c, s, a, b, what, slack});
            }
          };
          if (p.is_linear()) {
            record("base", p.base(c, j, s) + p.base(c, m, s) - p.base(c, a, s) - p.base(c, b, s));
            for (int c2 = 0; c2 < g.num_characteristics(); ++c2)
              for (int a2 = 0; a2 < g.num_actions(); ++a2)
                record(column_name(g, c2, a2), p.weight(c, j, s, c2, a2) + p.weight(c, m, s, c2, a2) -
                                                   p.weight(c, a, s, c2, a2) -
                                                   p.weight(c, b, s, c2, a2));
          } else {
            for (size_t n = 0; n < samples.size(); ++n) {
              const auto& mu = samples[n];
              record("sample " + std::to_string(n),
                     p.evaluator(c, j, s, mu) + p.evaluator(c, m, s, mu) -
                         p.evaluator(c, a, s, mu) - p.evaluator(c, b, s, mu));
            }
          }
        }
      }
    }
  }
  return report;
}

SupermodularityReport check_increasing_differences(const GameInstance& g) {
  if (!g.payoff.is_linear()) {
    throw std::invalid_argument("check_increasing_differences: unsupported for blackbox payoffs");
  }
  SupermodularityReport report;
  const auto& lat = g.actions;
  const auto& p = g.payoff;
  for (int c = 0; c < g.num_characteristics(); ++c) {
    for (int hi : g.availability[c]) {
      for (int lo : g.availability[c]) {
        if (hi == lo || !lat.le(lo, hi)) continue;
        for (int s = 0; s < g.num_states(); ++s) {
          for (int c2 = 0; c2 < g.num_characteristics(); ++c2) {
            if (g.characteristics.nu[c2] <= 0.0) continue;
            auto diff = [&](int a2) { return p.weight(c, hi, s, c2, a2) - p.weight(c, lo, s, c2, a2); };
            for (int x : g.availability[c2]) {
              for (int y : g.availability[c2]) {
                if (x == y || !lat.le(x, y)) continue;
                const double slack = diff(y) - diff(x);
                if (slack < -kValidatorTol) {
                  report.increasing_differences_ok = false;
                  report.violations.push_back({c, s, hi, lo, column_name(g, c2, x) + "<" +
                                                                 g.actions.label(y), slack});
                }
              }
            }
          }
        }
      }
    }
  }
  return report;
}

AggregateProfile induced_aggregate(const GameInstance& game, const StrategyProfile& zeta,
                                   int world) {
  AggregateProfile mu(game.num_characteristics(), game.num_actions());
  for (const auto& atom : game.type_space.tau.at(world)) {
    mu.at(atom.characteristic, zeta.action_at({atom.characteristic, atom.belief})) += atom.mass;
  }
  return mu;
}

namespace {

std::vector<AggregateProfile> all_aggregates(const GameInstance& game, const StrategyProfile& zeta) {
  std::vector<AggregateProfile> out;
  out.reserve(game.num_worlds());
  for (int t = 0; t < game.num_worlds(); ++t) out.push_back(induced_aggregate(game, zeta, t));
  return out;
}

std::vector<double> payoffs_against(const GameInstance& game, int c, int belief,
                                    const std::vector<AggregateProfile>& aggregates) {
  std::vector<double> payoff(game.num_actions(), 0.0);
  const auto& probs = game.beliefs.at(belief).probs;
  for (int t = 0; t < game.num_worlds(); ++t) {
    if (probs[t] <= 0.0) continue;
    const int s = game.type_space.sigma[t];
    for (int a : game.availability[c]) payoff[a] += probs[t] * eval_payoff(game, c, a, s, aggregates[t]);
  }
  return payoff;
}

std::vector<int> argmax_set(const GameInstance& game, int c, const std::vector<double>& payoff,
                            double tol) {
  double best = -numerics::kInfinity;
  for (int a : game.availability[c]) best = std::max(best, payoff[a]);
  std::vector<int> out;
  for (int a : game.availability[c])
    if (payoff[a] >= best - tol) out.push_back(a);
  return out;
}

}  // namespace

std::vector<double> expected_payoffs(const GameInstance& game, int c, int belief,
                                     const StrategyProfile& zeta) {
  return payoffs_against(game, c, belief, all_aggregates(game, zeta));
}

std::vector<int> best_response_set(const GameInstance& game, int c, int belief,
                                   const StrategyProfile& zeta, double tol) {
  return argmax_set(game, c, expected_payoffs(game, c, belief, zeta), tol);
}

EquilibriumCheck verify_equilibrium(const GameInstance& game, const StrategyProfile& zeta,
                                    double tol) {
  const auto aggregates = all_aggregates(game, zeta);
  EquilibriumCheck check;
  for (size_t i = 0; i < zeta.pairs.size(); ++i) {
    const auto [c, b] = zeta.pairs[i];
    const int played = zeta.actions[i];
    if (!game.available(c, played)) {
      check.violations.push_back({zeta.pairs[i], played, {}, numerics::kInfinity});
      continue;
    }
    const auto payoff = payoffs_against(game, c, b, aggregates);
    double best = -numerics::kInfinity;
    for (int a : game.availability[c]) best = std::max(best, payoff[a]);
    const double regret = best - payoff[played];
    check.max_regret = std::max(check.max_regret, regret);
    if (regret > tol) {
      check.violations.push_back({zeta.pairs[i], played, argmax_set(game, c, payoff, tol), regret});
    }
  }
  check.is_bne = check.violations.empty();
  return check;
}

ExtremalResult extremal_equilibrium(const GameInstance& game, Direction direction,
                                    const ExtremalOptions& options) {
  const bool top = direction == Direction::kTop;
  if (!options.force) {
    const auto sm = check_supermodular(game);
    if (!sm.ok()) throw AssumptionFailure("extremal_equilibrium: game is not supermodular");
    if (!game.payoff.is_linear() || !check_increasing_differences(game).ok()) {
      throw AssumptionFailure("extremal_equilibrium: increasing differences not verified");
    }
  }
  ExtremalResult result;
  result.zeta = constant_profile(game, top);
  result.trace.push_back(result.zeta);
  long long budget = 0;
  for (const auto& p : result.zeta.pairs) {
    budget += static_cast<long long>(game.availability[p.characteristic].size()) - 1;
  }
  const auto& lat = game.actions;
  while (true) {
    const auto aggregates = all_aggregates(game, result.zeta);
    StrategyProfile next;
    next.pairs = result.zeta.pairs;
    next.actions.resize(next.pairs.size());
    parallel_for(static_cast<int>(next.pairs.size()), 0, [&](int i) {
      const auto [c, b] = next.pairs[i];
      const auto best = argmax_set(game, c, payoffs_against(game, c, b, aggregates), options.tol);
      int pick = best.front();
      for (int a : best) pick = top ? lat.join(pick, a) : lat.meet(pick, a);
      if (!std::binary_search(best.begin(), best.end(), pick)) {
        std::ostringstream os;
        os << "BrokenLatticeArgmax at (" << game.characteristics.labels[c] << ", "
           << game.beliefs[b].label << "): " << (top ? "join" : "meet") << " "
           << lat.label(pick) << " of the argmax set is not itself a best response";
        throw BrokenLatticeArgmax(os.str());
      }
      next.actions[i] = pick;
    });
    if (next == result.zeta) break;
    ++result.rounds;
    if (result.rounds > budget) {
      throw AssumptionFailure("extremal_equilibrium: iteration did not settle within the bound");
    }
    result.trace.push_back(next);
    result.zeta = std::move(next);
  }
  result.verification = verify_equilibrium(game, result.zeta, options.tol);
  if (!result.verification.is_bne && !options.force) {
    throw InternalError("extremal_equilibrium: fixed point failed equilibrium verification");
  }
  return result;
}

SandwichReport sandwich_check(const GameInstance& game, const icr::BehaviorMap& rationalizable,
                              const StrategyProfile& top, const StrategyProfile& bottom) {
  SandwichReport report;
  const auto& lat = game.actions;
  for (size_t i = 0; i < rationalizable.pairs.size(); ++i) {
    const auto pair = rationalizable.pairs[i];
    const auto& set = rationalizable.sets[i];
    const int hi = top.action_at(pair);
    const int lo = bottom.action_at(pair);
    if (!std::binary_search(set.begin(), set.end(), hi)) {
      report.violations.push_back({pair, hi, "top equilibrium action is not rationalizable"});
    }
    if (!std::binary_search(set.begin(), set.end(), lo)) {
      report.violations.push_back({pair, lo, "bottom equilibrium action is not rationalizable"});
    }
    for (int a : set) {
      if (!lat.le(a, hi)) report.violations.push_back({pair, a, "above the top equilibrium"});
      if (!lat.le(lo, a)) report.violations.push_back({pair, a, "below the bottom equilibrium"});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

SandwichReport sandwich_check(const GameInstance& game, const ExtremalOptions& options) {
  const auto icr_result = icr::icr_solve(game);
  const auto top = extremal_equilibrium(game, Direction::kTop, options);
  const auto bottom = extremal_equilibrium(game, Direction::kBottom, options);
  return sandwich_check(game, icr_result.rationalizable, top.zeta, bottom.zeta);
}

}  // namespace lgl::equilibrium
