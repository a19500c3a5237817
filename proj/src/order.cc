#include "lgl/order.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "lgl/numerics.h"

namespace lgl::order {

FinitePoset FinitePoset::from_pairs(std::vector<std::string> elements,
                                    const std::vector<std::pair<int, int>>& pairs) {
  FinitePoset p;
  const int n = static_cast<int>(elements.size());
  p.elements = std::move(elements);
  p.leq.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) p.leq[i][i] = true;
  for (const auto& [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw std::invalid_argument("FinitePoset::from_pairs: index out of range");
    }
    p.leq[a][b] = true;
  }
  // Warshall closure.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (p.leq[i][k])
        for (int j = 0; j < n; ++j)
          if (p.leq[k][j]) p.leq[i][j] = true;
  return p;
}

FinitePoset FinitePoset::chain(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i > 0) pairs.emplace_back(i - 1, i);
  }
  return from_pairs(std::move(names), pairs);
}

std::string poset_defect(const FinitePoset& p) {
  const int n = p.size();
  if (static_cast<int>(p.leq.size()) != n) return "relation matrix has wrong row count";
  for (const auto& row : p.leq) {
    if (static_cast<int>(row.size()) != n) return "relation matrix is not square";
  }
  for (int i = 0; i < n; ++i) {
    if (!p.leq[i][i]) return "not reflexive at " + p.elements[i];
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p.leq[i][j] && p.leq[j][i]) {
        return "not antisymmetric: " + p.elements[i] + " and " + p.elements[j];
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.leq[i][j])
        for (int k = 0; k < n; ++k)
          if (p.leq[j][k] && !p.leq[i][k]) {
            return "not transitive: " + p.elements[i] + " <= " + p.elements[j] + " <= " +
                   p.elements[k];
          }
  return {};
}

namespace {

// Least element of the set of common upper (or lower) bounds, if unique.
std::optional<int> extremal_bound(const FinitePoset& p, int a, int b, bool upper) {
  const int n = p.size();
  std::vector<int> bounds;
  for (int z = 0; z < n; ++z) {
    const bool ok = upper ? (p.le(a, z) && p.le(b, z)) : (p.le(z, a) && p.le(z, b));
    if (ok) bounds.push_back(z);
  }
  for (int z : bounds) {
    bool extremal = true;
    for (int w : bounds) {
      if (upper ? !p.le(z, w) : !p.le(w, z)) {
        extremal = false;
        break;
      }
    }
    if (extremal) return z;
  }
  return std::nullopt;
}

}  // namespace

LatticeCheck check_lattice(const FinitePoset& p) {
  LatticeCheck out;
  const int n = p.size();
  out.join.assign(n, std::vector<int>(n, -1));
  out.meet.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      auto j = extremal_bound(p, a, b, true);
      auto m = extremal_bound(p, a, b, false);
      if (!j || !m) {
        out.witness = std::make_pair(a, b);
        out.join.clear();
        out.meet.clear();
        return out;
      }
      out.join[a][b] = out.join[b][a] = *j;
      out.meet[a][b] = out.meet[b][a] = *m;
    }
  }
  out.is_lattice = n > 0;
  return out;
}

std::optional<int> top_element(const FinitePoset& p) {
  for (int i = 0; i < p.size(); ++i) {
    bool top = true;
    for (int j = 0; j < p.size() && top; ++j) top = p.le(j, i);
    if (top) return i;
  }
  return std::nullopt;
}

std::optional<int> bottom_element(const FinitePoset& p) {
  for (int i = 0; i < p.size(); ++i) {
    bool bottom = true;
    for (int j = 0; j < p.size() && bottom; ++j) bottom = p.le(i, j);
    if (bottom) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> enumerate_upper_sets(const FinitePoset& p) {
  const int n = p.size();
  if (n > kMaxEnumerationSize) {
    throw std::invalid_argument("enumerate_upper_sets: poset exceeds enumeration cap");
  }
  std::vector<std::vector<int>> sets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool closed = true;
    for (int i = 0; i < n && closed; ++i) {
      if (!(mask & (1u << i))) continue;
      for (int j = 0; j < n; ++j) {
        if (p.le(i, j) && !(mask & (1u << j))) {
          closed = false;
          break;
        }
      }
    }
    if (!closed) continue;
    std::vector<int> set;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) set.push_back(i);
    sets.push_back(std::move(set));
  }
  return sets;
}

namespace {

void check_distribution(const FinitePoset& p, const std::vector<double>& d, const char* name) {
  if (static_cast<int>(d.size()) != p.size()) {
    throw std::invalid_argument(std::string("stochastic_dominates: ") + name +
                                " has wrong length");
  }
  double total = 0.0;
  for (double x : d) {
    if (x < 0.0) throw std::invalid_argument(std::string("stochastic_dominates: negative mass in ") + name);
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string("stochastic_dominates: ") + name +
                                " is not a probability vector");
  }
}

DominanceResult by_coupling(const FinitePoset& p, const std::vector<double>& upper,
                            const std::vector<double>& lower) {
  const int n = p.size();
  numerics::FlowNetwork net;
  net.num_nodes = 2 * n + 2;
  net.source = 2 * n;
  net.sink = 2 * n + 1;
  for (int i = 0; i < n; ++i) net.add_arc(net.source, i, upper[i]);
  std::vector<std::pair<int, int>> edge_of_arc;
  const int first_graph_arc = static_cast<int>(net.arcs.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (p.le(j, i)) {
        net.add_arc(i, n + j, 1.0);
        edge_of_arc.emplace_back(i, j);
      }
    }
  }
  for (int j = 0; j < n; ++j) net.add_arc(n + j, net.sink, lower[j]);
  const auto flow = numerics::max_flow(net);

  DominanceResult result;
  result.dominates = flow.value >= 1.0 - kDominanceTol;
  if (result.dominates) {
    std::vector<std::vector<double>> coupling(n, std::vector<double>(n, 0.0));
    for (size_t k = 0; k < edge_of_arc.size(); ++k) {
      const auto [i, j] = edge_of_arc[k];
      coupling[i][j] = flow.flow[first_graph_arc + k];
    }
    result.coupling = std::move(coupling);
  }
  return result;
}

DominanceResult by_upper_sets(const FinitePoset& p, const std::vector<double>& upper,
                              const std::vector<double>& lower) {
  DominanceResult result;
  result.dominates = true;
  double worst = 0.0;
  for (const auto& set : enumerate_upper_sets(p)) {
    double gap = 0.0;
    for (int i : set) gap += lower[i] - upper[i];
    if (gap > kDominanceTol && gap > worst) {
      worst = gap;
      result.dominates = false;
      result.violating_upper_set = set;
    }
  }
  return result;
}

// Enumerates 0/1 monotone functions directly along a linear extension,
// without going through upper-set closure checks.
DominanceResult by_monotone_functions(const FinitePoset& p, const std::vector<double>& upper,
                                      const std::vector<double>& lower) {
  const int n = p.size();
  if (n > kMaxEnumerationSize) {
    throw std::invalid_argument("stochastic_dominates: poset exceeds enumeration cap");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> below(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.le(j, i)) ++below[i];
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return below[a] < below[b]; });

  std::vector<int> g(n, 0);
  DominanceResult result;
  result.dominates = true;
  std::function<void(int)> assign = [&](int pos) {
    if (!result.dominates) return;
    if (pos == n) {
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff += g[i] * (upper[i] - lower[i]);
      if (diff < -kDominanceTol) result.dominates = false;
      return;
    }
    const int x = order[pos];
    int floor_value = 0;
    for (int y = 0; y < n; ++y) {
      if (y != x && p.le(y, x) && g[y] == 1) floor_value = 1;
    }
    // Predecessors of x all appear earlier in the linear extension.
    for (int value = floor_value; value <= 1; ++value) {
      g[x] = value;
      assign(pos + 1);
    }
    g[x] = 0;
  };
  assign(0);
  return result;
}

}  // namespace

DominanceResult stochastic_dominates(const FinitePoset& p, const std::vector<double>& upper,
                                     const std::vector<double>& lower, DominanceMethod method) {
  check_distribution(p, upper, "upper");
  check_distribution(p, lower, "lower");
  switch (method) {
    case DominanceMethod::kCoupling:
      return by_coupling(p, upper, lower);
    case DominanceMethod::kUpperSets:
      return by_upper_sets(p, upper, lower);
    case DominanceMethod::kMonotoneFunctions:
      return by_monotone_functions(p, upper, lower);
  }
  throw std::invalid_argument("stochastic_dominates: unknown method");
}

bool product_order_dominates(const std::vector<double>& c_marginal, const FinitePoset& p,
                             const std::vector<std::vector<double>>& upper,
                             const std::vector<std::vector<double>>& lower,
                             DominanceMethod method) {
  const size_t num_c = c_marginal.size();
  if (upper.size() != num_c || lower.size() != num_c) {
    throw std::invalid_argument("product_order_dominates: characteristic count mismatch");
  }
  for (size_t c = 0; c < num_c; ++c) {
    const double su = std::accumulate(upper[c].begin(), upper[c].end(), 0.0);
    const double sl = std::accumulate(lower[c].begin(), lower[c].end(), 0.0);
    if (std::abs(su - c_marginal[c]) > 1e-12 || std::abs(sl - c_marginal[c]) > 1e-12) {
      throw std::invalid_argument("product_order_dominates: marginal mismatch at characteristic " +
                                  std::to_string(c));
    }
  }
  for (size_t c = 0; c < num_c; ++c) {
    if (c_marginal[c] <= 1e-12) continue;
    std::vector<double> u(upper[c]), l(lower[c]);
    for (double& x : u) x /= c_marginal[c];
    for (double& x : l) x /= c_marginal[c];
    if (!stochastic_dominates(p, u, l, method).dominates) return false;
  }
  return true;
}

}  // namespace lgl::order
