#include "lgl/email_game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace lgl::email_game {

namespace {

constexpr double kMergeTol = 1e-12;

std::string position_label(int k) { return "p" + std::to_string(k); }

double position_of(const EmailGameParams& p, int k) {
  return static_cast<double>(k) / p.n_positions;
}

// Number of times the signal has passed position i when it dies at d.
// d must not be a crossing time.
int signal_count(double i, double d) {
  const double x = d - i;
  if (x <= 0.0) return 0;
  return static_cast<int>(std::floor(x)) + 1;
}

// P(lo < D < hi) for D ~ Exp(alpha).
double exp_mass(double alpha, double lo, double hi) {
  return std::exp(-alpha * lo) - std::exp(-alpha * hi);
}

std::pair<double, double> death_interval(const EmailGameParams& p, double i, int n) {
  if (p.reading == IntervalReading::kLiteral) return {n * i, n * i + 1.0};
  return {n - 1 + i, n + i};
}

void normalize(std::vector<double>& probs) {
  double total = 0.0;
  for (double x : probs) total += x;
  for (double& x : probs) x /= total;
}

struct Grid {
  std::vector<double> lo, hi;
  double horizon = 0.0;
};

Grid death_grid(const EmailGameParams& p) {
  Grid g;
  g.horizon = p.max_signals - 1;
  std::vector<double> points{0.0, g.horizon};
  const int h = p.max_signals - 1;
  for (int m = 0; m < h; ++m) {
    for (int k = 0; k < p.n_positions; ++k) points.push_back(m + position_of(p, k));
    // Quantiles of the death time within [m, m + 1).
    const double unit = -std::expm1(-p.alpha);
    for (int j = 1; j < p.buckets_per_unit; ++j) {
      const double q = static_cast<double>(j) / p.buckets_per_unit;
      points.push_back(m - std::log1p(-q * unit) / p.alpha);
    }
  }
  if (p.reading == IntervalReading::kLiteral) {
    for (int n = 1; n <= p.max_signals; ++n) {
      for (int k = 0; k < p.n_positions; ++k) {
        const auto [a, b] = death_interval(p, position_of(p, k), n);
        points.push_back(a);
        points.push_back(b);
      }
    }
  }
  std::sort(points.begin(), points.end());
  std::vector<double> merged;
  for (double x : points) {
    if (x < 0.0 || x > g.horizon) continue;
    if (merged.empty() || x - merged.back() > kMergeTol) merged.push_back(x);
  }
  for (size_t j = 0; j + 1 < merged.size(); ++j) {
    g.lo.push_back(merged[j]);
    g.hi.push_back(merged[j + 1]);
  }
  return g;
}

}  // namespace

void check_params(const EmailGameParams& p) {
  if (!(p.M > 0.0)) throw std::invalid_argument("email game: M must be positive");
  if (!(p.L > 0.0)) throw std::invalid_argument("email game: L must be positive");
  if (p.enforce_payoff_order && !(p.L > p.M)) {
    throw std::invalid_argument("email game: payoffs must satisfy L > M > 0");
  }
  if (!(p.pi >= 0.0 && p.pi <= 1.0)) throw std::invalid_argument("email game: pi must lie in [0, 1]");
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw std::invalid_argument("email game: alpha must be positive");
  }
  if (p.n_positions < 2) throw std::invalid_argument("email game: n_positions must be at least 2");
  if (p.max_signals < 1) throw std::invalid_argument("email game: max_signals must be at least 1");
  if (p.buckets_per_unit < 1) {
    throw std::invalid_argument("email game: buckets_per_unit must be at least 1");
  }
}

double contagion_function(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("contagion_function: alpha must be positive");
  if (alpha < 1e-4) {
    const double a2 = alpha * alpha;
    return 0.5 - alpha / 12.0 + alpha * a2 / 720.0 - alpha * a2 * a2 / 30240.0;
  }
  return 1.0 / alpha - 1.0 / std::expm1(alpha);
}

double risk_dominance_threshold(double M, double L, bool enforce_order) {
  if (!(M > 0.0) || !(L > 0.0) || (enforce_order && !(L > M))) {
    throw std::invalid_argument("risk_dominance_threshold: requires L > M > 0");
  }
  return L / (M + L);
}

double pi_i(const EmailGameParams& p, double i) {
  const double died = -std::expm1(-p.alpha * i);
  const double z = 1.0 - p.pi + p.pi * died;
  if (z <= 0.0) return 0.0;
  return p.pi * died / z;
}

int EmailGameModel::no_signal_belief(int position) const {
  for (int b = 0; b < static_cast<int>(tags.size()); ++b)
    if (tags[b].kind == BeliefTag::Kind::kNoSignal && tags[b].position == position) return b;
  return -1;
}

int EmailGameModel::signal_belief(int position, int signals) const {
  for (int b = 0; b < static_cast<int>(tags.size()); ++b)
    if (tags[b].kind == BeliefTag::Kind::kSignals && tags[b].position == position &&
        tags[b].signals == signals)
      return b;
  return -1;
}

namespace {

std::vector<double> no_signal_probs(const EmailGameParams& p, const Grid& grid, int world_offset,
                                    int num_worlds, int k) {
  std::vector<double> probs(num_worlds, 0.0);
  const double i = position_of(p, k);
  const double z = 1.0 - p.pi + p.pi * -std::expm1(-p.alpha * i);
  if (z <= 0.0) {
    probs[0] = 1.0;
    return probs;
  }
  probs[0] = (1.0 - p.pi) / z;
  for (size_t j = 0; j < grid.lo.size(); ++j) {
    if (grid.hi[j] <= i + kMergeTol) probs[world_offset + j] = p.pi * exp_mass(p.alpha, grid.lo[j], grid.hi[j]) / z;
  }
  normalize(probs);
  return probs;
}

std::vector<double> signal_probs(const EmailGameParams& p, const Grid& grid, int world_offset,
                                 int infinity_world, int num_worlds, int k, int n) {
  std::vector<double> probs(num_worlds, 0.0);
  const auto [lo, hi] = death_interval(p, position_of(p, k), n);
  for (size_t j = 0; j < grid.lo.size(); ++j) {
    const double mid = 0.5 * (grid.lo[j] + grid.hi[j]);
    if (mid > lo && mid < hi) probs[world_offset + j] = exp_mass(p.alpha, grid.lo[j], grid.hi[j]);
  }
  if (hi > grid.horizon + kMergeTol) {
    probs[infinity_world] = exp_mass(p.alpha, std::max(lo, grid.horizon), hi);
  }
  normalize(probs);
  return probs;
}

}  // namespace

EmailGameModel generate_email_game(const EmailGameParams& p) {
  check_params(p);
  const Grid grid = death_grid(p);
  const int n = p.n_positions;
  const int cells = static_cast<int>(grid.lo.size());
  const int offset = 1;
  const int infinity_world = offset + cells;
  const int num_worlds = infinity_world + 1;

  EmailGameModel model;
  model.zero_world = 0;
  model.infinity_world = infinity_world;
  model.horizon = grid.horizon;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  model.cell_lo.assign(num_worlds, nan);
  model.cell_hi.assign(num_worlds, nan);

  GameInstance& g = model.game;
  g.name = "email-game";
  for (int k = 0; k < n; ++k) {
    g.characteristics.labels.push_back(position_label(k));
    g.characteristics.nu.push_back(1.0 / n);
  }
  g.actions = ActionLattice::chain({"0", "1"});
  g.availability.assign(n, {0, 1});
  g.states.labels = {"0", "1"};
  g.states.values = std::vector<double>{0.0, 1.0};

  auto& ts = g.type_space;
  ts.worlds.push_back("s0");
  ts.sigma.push_back(0);
  for (int j = 0; j < cells; ++j) {
    ts.worlds.push_back("s1#" + std::to_string(j));
    ts.sigma.push_back(1);
    model.cell_lo[offset + j] = grid.lo[j];
    model.cell_hi[offset + j] = grid.hi[j];
  }
  ts.worlds.push_back("s1:inf");
  ts.sigma.push_back(1);

  // Counts at every cell, then the signal beliefs that occur, ordered by
  // (signals, position).
  std::vector<std::vector<int>> counts(cells, std::vector<int>(n, 0));
  std::map<std::pair<int, int>, int> signal_ids;
  for (int j = 0; j < cells; ++j) {
    const double mid = 0.5 * (grid.lo[j] + grid.hi[j]);
    for (int k = 0; k < n; ++k) {
      counts[j][k] = signal_count(position_of(p, k), mid);
      if (counts[j][k] > 0) signal_ids[{counts[j][k], k}] = -1;
    }
  }

  for (int k = 0; k < n; ++k) {
    g.beliefs.push_back({position_label(k) + ":none", no_signal_probs(p, grid, offset, num_worlds, k)});
    model.tags.push_back({BeliefTag::Kind::kNoSignal, k, 0});
  }
  const int infinity_belief = g.num_beliefs();
  {
    std::vector<double> probs(num_worlds, 0.0);
    probs[infinity_world] = 1.0;
    g.beliefs.push_back({"inf", std::move(probs)});
    model.tags.push_back({BeliefTag::Kind::kInfinity, 0, 0});
  }
  for (auto& [key, id] : signal_ids) {
    const auto [signals, k] = key;
    id = g.num_beliefs();
    g.beliefs.push_back({position_label(k) + ":n" + std::to_string(signals),
                         signal_probs(p, grid, offset, infinity_world, num_worlds, k, signals)});
    model.tags.push_back({BeliefTag::Kind::kSignals, k, signals});
  }

  const double share = 1.0 / n;
  ts.tau.resize(num_worlds);
  for (int k = 0; k < n; ++k) ts.tau[0].push_back({k, k, share});
  for (int j = 0; j < cells; ++j) {
    for (int k = 0; k < n; ++k) {
      const int c = counts[j][k];
      ts.tau[offset + j].push_back({k, c == 0 ? k : signal_ids.at({c, k}), share});
    }
  }
  for (int k = 0; k < n; ++k) ts.tau[infinity_world].push_back({k, infinity_belief, share});

  // v depends on mu only through its action marginal.
  g.payoff = PayoffOracle::linear(n, 2, 2);
  for (int c = 0; c < n; ++c) {
    for (int c2 = 0; c2 < n; ++c2) {
      g.payoff.weight(c, 0, 0, c2, 0) = p.M;
      g.payoff.weight(c, 1, 0, c2, 0) = -p.L;
      g.payoff.weight(c, 1, 1, c2, 1) = p.M;
      g.payoff.weight(c, 1, 1, c2, 0) = -p.L;
    }
  }
  return model;
}

GameInstance build_email_game(const EmailGameParams& p) { return generate_email_game(p).game; }

EmailGameDerived derive(const EmailGameParams& p) {
  const auto model = generate_email_game(p);
  EmailGameDerived d;
  d.n_signal_beliefs.resize(p.n_positions);
  for (int k = 0; k < p.n_positions; ++k) {
    d.pi_i.push_back(pi_i(p, position_of(p, k)));
    d.no_signal_beliefs.push_back(model.game.beliefs[model.no_signal_belief(k)].probs);
    for (int s = 1; s <= p.max_signals; ++s) {
      const int b = model.signal_belief(k, s);
      d.n_signal_beliefs[k].push_back(b < 0 ? std::vector<double>{} : model.game.beliefs[b].probs);
    }
  }
  return d;
}

std::vector<double> conditional_death_probabilities(const EmailGameParams& p, int position,
                                                    int signal_count) {
  check_params(p);
  if (position < 0 || position >= p.n_positions || signal_count < 0) {
    throw std::invalid_argument("conditional_death_probabilities: position or count out of range");
  }
  const Grid grid = death_grid(p);
  const int cells = static_cast<int>(grid.lo.size());
  if (signal_count == 0) return no_signal_probs(p, grid, 1, cells + 2, position);
  return signal_probs(p, grid, 1, cells + 1, cells + 2, position, signal_count);
}

ContagionResult contagion_check(const EmailGameParams& p, const icr::SolverOptions& options) {
  return contagion_check(generate_email_game(p), p, options);
}

ContagionResult contagion_check(const EmailGameModel& model, const EmailGameParams& p,
                                const icr::SolverOptions& options) {
  const auto& g = model.game;
  ContagionResult result;
  result.threshold = risk_dominance_threshold(p.M, p.L, p.enforce_payoff_order);
  result.contagion_value = contagion_function(p.alpha);

  auto seed = icr::full_availability(g);
  for (size_t i = 0; i < seed.pairs.size(); ++i) {
    if (model.tags[seed.pairs[i].belief].kind == BeliefTag::Kind::kNoSignal) seed.sets[i] = {0};
  }
  result.icr = icr::icr_solve_from(g, std::move(seed), options);
  result.rounds = result.icr.rounds;

  auto reception_time = [&](const BeliefTag& tag) {
    return tag.signals - 1 + position_of(p, tag.position);
  };
  for (size_t m = 1; m < result.icr.trace.size(); ++m) {
    const auto& map = result.icr.trace[m];
    FrontRow row;
    row.round = static_cast<int>(m);
    for (size_t i = 0; i < map.pairs.size(); ++i) {
      const auto& tag = model.tags[map.pairs[i].belief];
      if (tag.kind != BeliefTag::Kind::kSignals || map.sets[i] != std::vector<int>{0}) continue;
      ++row.eliminated_pairs;
      const double t = reception_time(tag);
      if (row.front_position < 0 || t > row.front_time) {
        row.front_time = t;
        row.front_position = tag.position;
        row.front_signals = tag.signals;
      }
    }
    result.front.push_back(row);
  }

  const auto& final_map = result.icr.rationalizable;
  for (size_t i = 0; i < final_map.pairs.size(); ++i) {
    const int b = final_map.pairs[i].belief;
    const bool keeps_one = std::binary_search(final_map.sets[i].begin(), final_map.sets[i].end(), 1);
    if (g.beliefs[b].probs[model.infinity_world] > 0.0) {
      if (keeps_one) ++result.tail_pairs_retaining_one;
      continue;
    }
    ++result.pairs_checked;
    if (keeps_one) result.retained.push_back(final_map.pairs[i]);
  }
  result.all_zero_unique = result.retained.empty();
  return result;
}

}  // namespace lgl::email_game
