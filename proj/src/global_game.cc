#include "lgl/global_game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace lgl::global_game {

namespace {

constexpr double kTieTol = 1e-12;

BeliefSet filter(int n, const auto& keep) {
  BeliefSet out;
  for (int b = 0; b < n; ++b)
    if (keep(b)) out.push_back(b);
  return out;
}

}  // namespace

BeliefSet all_beliefs(const GameInstance& game) {
  BeliefSet out(game.num_beliefs());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

double BeliefStatistics::share(int belief, const BeliefSet& set) const {
  double total = 0.0;
  for (int b : set) total += expected_population[belief][b];
  return total;
}

BeliefStatistics compute_statistics(const GameInstance& game) {
  if (game.num_characteristics() != 1) {
    throw std::invalid_argument("global game analysis requires exactly one characteristic");
  }
  if (!game.states.values) {
    throw std::invalid_argument("global game analysis requires numeric state values");
  }
  const auto& values = *game.states.values;
  for (double v : values) {
    if (!(v >= -1.0 && v <= 2.0)) {
      throw std::invalid_argument("global game states must lie in [-1, 2]");
    }
  }
  const int nb = game.num_beliefs();
  const int nw = game.num_worlds();
  // population[t][b]: mass of belief b in world t.
  std::vector<std::vector<double>> population(nw, std::vector<double>(nb, 0.0));
  for (int t = 0; t < nw; ++t)
    for (const auto& atom : game.type_space.tau[t]) population[t][atom.belief] += atom.mass;

  BeliefStatistics stats;
  stats.x.assign(nb, 0.0);
  stats.rank.assign(nb, 0.0);
  stats.expected_population.assign(nb, std::vector<double>(nb, 0.0));
  for (int b = 0; b < nb; ++b) {
    const auto& probs = game.beliefs[b].probs;
    for (int t = 0; t < nw; ++t) {
      if (probs[t] == 0.0) continue;
      stats.x[b] += probs[t] * values[game.type_space.sigma[t]];
      for (int b2 = 0; b2 < nb; ++b2) stats.expected_population[b][b2] += probs[t] * population[t][b2];
    }
  }
  for (int b = 0; b < nb; ++b) {
    const auto below = filter(nb, [&](int b2) { return stats.x[b2] <= stats.x[b] + kTieTol; });
    stats.rank[b] = stats.share(b, below);
  }
  return stats;
}

BeliefSet urb_set(const BeliefStatistics& stats, double eps) {
  return filter(stats.size(), [&](int b) {
    return 0.5 - eps <= stats.rank[b] && stats.rank[b] <= 0.5 + eps;
  });
}

BeliefSet srd_set(const BeliefStatistics& stats, double eps) {
  return filter(stats.size(), [&](int b) { return stats.x[b] > 0.5 + eps; });
}

BeliefSet nsrd_set(const BeliefStatistics& stats, double eps) {
  return filter(stats.size(), [&](int b) { return stats.x[b] < 0.5 - eps; });
}

double Threshold::at(const BeliefStatistics& stats, int belief) const {
  switch (kind) {
    case Kind::kConstant:
      return p;
    case Kind::kExpectedState:
      return stats.x[belief];
    case Kind::kOneMinusExpectedState:
      return 1.0 - stats.x[belief];
  }
  return p;
}

BeliefSet belief_operator(const BeliefStatistics& stats, const Threshold& f, const BeliefSet& set,
                          double tol) {
  BeliefSet out;
  for (int b : set)
    if (stats.share(b, set) >= f.at(stats, b) - tol) out.push_back(b);
  return out;
}

CertaintyResult certainty_operator(const BeliefStatistics& stats, const Threshold& f,
                                   const BeliefSet& set, double tol) {
  CertaintyResult result{set, 0};
  while (true) {
    auto next = belief_operator(stats, f, result.set, tol);
    ++result.iterations;
    if (next == result.set) return result;
    result.set = std::move(next);
  }
}

Thresholds x_thresholds(const BeliefStatistics& stats, double eps, const BeliefSet& set) {
  Thresholds out;
  out.x_upper = -std::numeric_limits<double>::infinity();
  out.x_lower = std::numeric_limits<double>::infinity();
  for (int b : set) {
    if (stats.x[b] <= stats.rank[b] + eps) {
      out.upper_empty = false;
      out.x_upper = std::max(out.x_upper, stats.x[b]);
    }
    if (stats.x[b] >= stats.rank[b] - eps) {
      out.lower_empty = false;
      out.x_lower = std::min(out.x_lower, stats.x[b]);
    }
  }
  return out;
}

BeliefSet invest_possible(const BeliefStatistics& stats) {
  BeliefSet all(stats.size());
  std::iota(all.begin(), all.end(), 0);
  return certainty_operator(stats, Threshold::one_minus_x(), all).set;
}

BeliefSet noninvest_possible(const BeliefStatistics& stats) {
  BeliefSet all(stats.size());
  std::iota(all.begin(), all.end(), 0);
  return certainty_operator(stats, Threshold::x(), all).set;
}

UniquenessCertificate uniqueness_certificate(const GameInstance& game, double eps) {
  const auto stats = compute_statistics(game);
  UniquenessCertificate cert;
  cert.eps = eps;
  cert.urb = urb_set(stats, eps);
  const auto p = Threshold::constant(1.0 - eps);
  cert.certain_urb = certainty_operator(stats, p, cert.urb).set;

  auto intersect = [](const BeliefSet& a, const BeliefSet& b) {
    BeliefSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  cert.invest_region = intersect(srd_set(stats, 2.0 * eps), cert.certain_urb);
  cert.noninvest_region = intersect(nsrd_set(stats, 2.0 * eps), cert.certain_urb);

  auto& report = cert.assumptions;
  const auto fixed = belief_operator(stats, p, cert.certain_urb);
  report.fixed_point_ok = fixed == cert.certain_urb;
  report.premise_ok = std::includes(fixed.begin(), fixed.end(), cert.certain_urb.begin(),
                                    cert.certain_urb.end());
  const auto certified = x_thresholds(stats, eps, cert.certain_urb);
  const auto urb = x_thresholds(stats, eps, cert.urb);
  report.x_upper_certified = certified.x_upper;
  report.x_upper_urb = urb.x_upper;
  report.x_lower_certified = certified.x_lower;
  report.threshold_chain_ok =
      certified.x_upper <= urb.x_upper && urb.x_upper <= 0.5 + 2.0 * eps + kTieTol;
  report.notes.push_back("closedness of C_{1-eps}(URB_eps) holds trivially for a finite registry");
  if (eps < 0.25) {
    report.notes.push_back(
        "eps < 1/4: the most optimistic member of any set E with E subset of B_{1-eps}(E) has "
        "rank >= 1 - eps > 1/2 + eps, so C_{1-eps}(URB_eps) is empty for finite registries");
  }
  return cert;
}

GameInstance build_game(const GlobalGameSpec& spec) {
  GameInstance g;
  g.name = spec.name;
  g.characteristics.labels = {"c"};
  g.characteristics.nu = {1.0};
  g.actions = ActionLattice::chain({"0", "1"});
  g.availability = {{0, 1}};
  const int nw = static_cast<int>(spec.world_states.size());
  std::vector<double> values;
  for (int t = 0; t < nw; ++t) {
    g.states.labels.push_back("s" + std::to_string(t));
    values.push_back(spec.world_states[t]);
    g.type_space.worlds.push_back("t" + std::to_string(t));
    g.type_space.sigma.push_back(t);
    std::vector<TauAtom> atoms;
    for (const auto& [b, m] : spec.populations.at(t)) atoms.push_back({0, b, m});
    g.type_space.tau.push_back(std::move(atoms));
  }
  g.states.values = std::move(values);
  for (size_t b = 0; b < spec.beliefs.size(); ++b) {
    g.beliefs.push_back({"b" + std::to_string(b), spec.beliefs[b]});
    g.queries.push_back({0, static_cast<int>(b)});
  }
  g.payoff = PayoffOracle::linear(1, 2, nw);
  for (int s = 0; s < nw; ++s) {
    g.payoff.base(0, 1, s) = spec.world_states[s] - 1.0;
    g.payoff.weight(0, 1, s, 0, 1) = 1.0;
  }
  return g;
}

GlobalGameSpec common_certainty_spec(const std::vector<double>& states) {
  GlobalGameSpec spec;
  spec.name = "global-common-certainty";
  const int n = static_cast<int>(states.size());
  spec.world_states = states;
  for (int k = 0; k < n; ++k) {
    spec.populations.push_back({{k, 1.0}});
    std::vector<double> probs(n, 0.0);
    probs[k] = 1.0;
    spec.beliefs.push_back(std::move(probs));
  }
  return spec;
}

GlobalGameSpec rank_ladder_spec(const std::vector<double>& states) {
  GlobalGameSpec spec;
  spec.name = "global-rank-ladder";
  const int n = static_cast<int>(states.size());
  spec.world_states = states;
  std::vector<std::pair<int, double>> population;
  for (int k = 0; k < n; ++k) population.emplace_back(k, 1.0 / n);
  for (int k = 0; k < n; ++k) {
    spec.populations.push_back(population);
    std::vector<double> probs(n, 0.0);
    probs[k] = 1.0;
    spec.beliefs.push_back(std::move(probs));
  }
  return spec;
}

GlobalGameSpec window_spec(int signals, int window, double lo, double hi) {
  if (window < 1 || signals < window) {
    throw std::invalid_argument("window_spec: need 1 <= window <= signals");
  }
  GlobalGameSpec spec;
  spec.name = "global-window";
  const int nw = signals - window + 1;
  for (int j = 0; j < nw; ++j) {
    spec.world_states.push_back(nw == 1 ? lo : lo + (hi - lo) * j / (nw - 1));
    std::vector<std::pair<int, double>> population;
    for (int k = j; k < j + window; ++k) population.emplace_back(k, 1.0 / window);
    spec.populations.push_back(std::move(population));
  }
  for (int k = 0; k < signals; ++k) {
    std::vector<double> probs(nw, 0.0);
    const int first = std::max(0, k - window + 1);
    const int last = std::min(nw - 1, k);
    for (int j = first; j <= last; ++j) probs[j] = 1.0 / (last - first + 1);
    spec.beliefs.push_back(std::move(probs));
  }
  return spec;
}

GlobalGameSpec random_spec(std::uint64_t seed, int max_worlds, int max_beliefs) {
  std::mt19937_64 rng(seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GlobalGameSpec spec;
  spec.name = "global-random-" + std::to_string(seed);
  const int nw = uniform_int(1, max_worlds);
  const int nb = uniform_int(1, max_beliefs);

  auto random_distribution = [&](int n, int max_support) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(uniform_int(1, std::min(n, max_support)));
    std::sort(ids.begin(), ids.end());
    std::vector<double> w(ids.size());
    double total = 0.0;
    for (auto& x : w) total += (x = 0.05 + unit(rng));
    std::vector<std::pair<int, double>> out;
    for (size_t i = 0; i < ids.size(); ++i) out.emplace_back(ids[i], w[i] / total);
    return out;
  };

  for (int t = 0; t < nw; ++t) {
    spec.world_states.push_back(-1.0 + 3.0 * unit(rng));
    spec.populations.push_back(random_distribution(nb, 3));
  }
  for (int b = 0; b < nb; ++b) {
    std::vector<double> probs(nw, 0.0);
    for (const auto& [t, p] : random_distribution(nw, 4)) probs[t] = p;
    spec.beliefs.push_back(std::move(probs));
  }
  return spec;
}

}  // namespace lgl::global_game
