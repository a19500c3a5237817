#ifndef LGL_TESTS_GENERATORS_H_
#define LGL_TESTS_GENERATORS_H_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "lgl/game.h"
#include "lgl/order.h"

namespace lgl::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  bool coin(double p = 0.5) { return uniform() < p; }
  // Multiples of `step` make ties likely.
  double grid(double lo, double hi, double step) {
    const int n = static_cast<int>(std::floor((hi - lo) / step));
    return lo + step * integer(0, n);
  }
  // Random probability vector with the given support size.
  std::vector<double> simplex(int n, int support) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), engine_);
    std::vector<double> p(n, 0.0);
    double total = 0.0;
    for (int k = 0; k < support; ++k) total += (p[ids[k]] = 0.1 + uniform());
    for (double& x : p) x /= total;
    return p;
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<std::string> labels(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Random finite game with a chain of actions. Weights are built as
// f(a) + g(a') + sum_{k<=a, j<=a'} d_kj with d >= 0, which gives increasing
// differences in (own action, others' action) for every characteristic pair.
struct RandomGameShape {
  int max_characteristics = 3;
  int max_actions = 3;
  int max_worlds = 4;
  int max_beliefs = 5;
  bool supermodular = true;
};

inline GameInstance random_game(std::uint64_t seed, const RandomGameShape& shape = {}) {
  Rng rng(seed);
  GameInstance g;
  g.name = "random-" + std::to_string(seed);
  const int nc = rng.integer(1, shape.max_characteristics);
  const int na = rng.integer(2, shape.max_actions);
  const int nw = rng.integer(1, shape.max_worlds);
  const int nb = rng.integer(1, shape.max_beliefs);
  const int ns = rng.integer(1, 2);

  g.characteristics.labels = labels("c", nc);
  g.characteristics.nu = rng.simplex(nc, nc);
  g.actions = ActionLattice::chain(labels("a", na));
  for (int c = 0; c < nc; ++c) {
    std::vector<int> set;
    for (int a = 0; a < na; ++a)
      if (rng.coin(0.8)) set.push_back(a);
    if (set.empty()) set.push_back(rng.integer(0, na - 1));
    g.availability.push_back(set);
  }
  g.states.labels = labels("s", ns);
  g.states.values = std::vector<double>(ns);
  for (int s = 0; s < ns; ++s) (*g.states.values)[s] = s;

  g.type_space.worlds = labels("t", nw);
  for (int t = 0; t < nw; ++t) g.type_space.sigma.push_back(rng.integer(0, ns - 1));
  for (int b = 0; b < nb; ++b) {
    g.beliefs.push_back({"b" + std::to_string(b), rng.simplex(nw, rng.integer(1, nw))});
  }
  for (int t = 0; t < nw; ++t) {
    std::vector<TauAtom> atoms;
    for (int c = 0; c < nc; ++c) {
      const int k = rng.integer(1, std::min(2, nb));
      std::vector<int> ids(nb);
      std::iota(ids.begin(), ids.end(), 0);
      std::shuffle(ids.begin(), ids.end(), rng.engine());
      if (k == 1) {
        atoms.push_back({c, ids[0], g.characteristics.nu[c]});
      } else {
        const double share = rng.uniform(0.2, 0.8);
        atoms.push_back({c, ids[0], g.characteristics.nu[c] * share});
        atoms.push_back({c, ids[1], g.characteristics.nu[c] - g.characteristics.nu[c] * share});
      }
    }
    g.type_space.tau.push_back(std::move(atoms));
  }
  // Occasionally query a pair outside the tau support.
  if (rng.coin(0.3)) g.queries.push_back({rng.integer(0, nc - 1), rng.integer(0, nb - 1)});

  g.payoff = PayoffOracle::linear(nc, na, ns);
  for (int c = 0; c < nc; ++c) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) g.payoff.base(c, a, s) = rng.grid(-1.0, 1.0, 0.25);
      for (int c2 = 0; c2 < nc; ++c2) {
        std::vector<double> f(na), h(na);
        for (int a = 0; a < na; ++a) {
          f[a] = rng.grid(-1.0, 1.0, 0.25);
          h[a] = rng.grid(-1.0, 1.0, 0.25);
        }
        std::vector<std::vector<double>> d(na, std::vector<double>(na, 0.0));
        for (int k = 1; k < na; ++k)
          for (int j = 1; j < na; ++j)
            d[k][j] = shape.supermodular ? rng.grid(0.0, 2.0, 0.25) : rng.grid(-2.0, 2.0, 0.25);
        for (int a = 0; a < na; ++a) {
          for (int a2 = 0; a2 < na; ++a2) {
            double w = f[a] + h[a2];
            for (int k = 1; k <= a; ++k)
              for (int j = 1; j <= a2; ++j) w += d[k][j];
            g.payoff.weight(c, a, s, c2, a2) = w;
          }
        }
      }
    }
  }
  return g;
}

// Random poset on n elements: random relations i < j for i < j (index
// order is a linear extension), closed transitively.
inline order::FinitePoset random_poset(Rng& rng, int n, double density = 0.35) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.coin(density)) pairs.emplace_back(i, j);
  return order::FinitePoset::from_pairs(labels("x", n), pairs);
}

// Pushes random mass from atoms to elements above them, producing a
// distribution that dominates the input.
inline std::vector<double> push_up(Rng& rng, const order::FinitePoset& p,
                                   const std::vector<double>& d) {
  std::vector<double> out = d;
  const int n = p.size();
  for (int moves = 0; moves < n; ++moves) {
    const int i = rng.integer(0, n - 1);
    std::vector<int> above;
    for (int j = 0; j < n; ++j)
      if (j != i && p.le(i, j)) above.push_back(j);
    if (above.empty() || out[i] <= 0.0) continue;
    const double m = out[i] * rng.uniform();
    out[i] -= m;
    out[above[rng.integer(0, static_cast<int>(above.size()) - 1)]] += m;
  }
  return out;
}

// Micro instance for the conjecture-feasibility oracle: at most 2 worlds,
// at most 2 tau atoms per world, at most 3 actions, arbitrary linear payoffs.
inline GameInstance micro_game(std::uint64_t seed) {
  Rng rng(seed);
  GameInstance g;
  g.name = "micro-" + std::to_string(seed);
  const int nc = rng.integer(1, 2);
  const int na = rng.integer(2, 3);
  const int nw = rng.integer(1, 2);
  const int nb = 3;
  g.characteristics.labels = labels("c", nc);
  g.characteristics.nu = nc == 1 ? std::vector<double>{1.0} : std::vector<double>{0.5, 0.5};
  g.actions = ActionLattice::chain(labels("a", na));
  std::vector<int> all(na);
  std::iota(all.begin(), all.end(), 0);
  g.availability.assign(nc, all);
  g.states.labels = {"s0", "s1"};
  g.type_space.worlds = labels("t", nw);
  for (int t = 0; t < nw; ++t) g.type_space.sigma.push_back(rng.integer(0, 1));
  for (int b = 0; b < nb; ++b) g.beliefs.push_back({"b" + std::to_string(b), rng.simplex(nw, nw)});
  for (int t = 0; t < nw; ++t) {
    std::vector<TauAtom> atoms;
    if (nc == 2) {
      atoms.push_back({0, rng.integer(0, nb - 1), 0.5});
      atoms.push_back({1, rng.integer(0, nb - 1), 0.5});
    } else if (rng.coin()) {
      atoms.push_back({0, rng.integer(0, nb - 1), 1.0});
    } else {
      const double share = rng.uniform(0.2, 0.8);
      atoms.push_back({0, 0, share});
      atoms.push_back({0, 1 + rng.integer(0, 1), 1.0 - share});
    }
    g.type_space.tau.push_back(std::move(atoms));
  }
  g.queries.push_back({0, 2});
  g.payoff = PayoffOracle::linear(nc, na, 2);
  for (int c = 0; c < nc; ++c)
    for (int a = 0; a < na; ++a)
      for (int s = 0; s < 2; ++s) {
        g.payoff.base(c, a, s) = rng.uniform(-1.0, 1.0);
        for (int c2 = 0; c2 < nc; ++c2)
          for (int a2 = 0; a2 < na; ++a2) g.payoff.weight(c, a, s, c2, a2) = rng.uniform(-2.0, 2.0);
      }
  return g;
}

// Adds a copy t' of world t (same state and population) and moves a random
// share of every belief's mass on t over to t'.
inline GameInstance duplicate_world(const GameInstance& g, int t, Rng& rng) {
  GameInstance out = g;
  out.type_space.worlds.push_back(g.type_space.worlds[t] + "'");
  out.type_space.sigma.push_back(g.type_space.sigma[t]);
  out.type_space.tau.push_back(g.type_space.tau[t]);
  for (auto& belief : out.beliefs) {
    const double share = rng.uniform(0.1, 0.9);
    const double moved = belief.probs[t] * share;
    belief.probs[t] -= moved;
    belief.probs.push_back(moved);
  }
  return out;
}

}  // namespace lgl::testing

#endif  // LGL_TESTS_GENERATORS_H_
