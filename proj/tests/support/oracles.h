#ifndef LGL_TESTS_ORACLES_H_
#define LGL_TESTS_ORACLES_H_

#include <cmath>
#include <vector>

#include "lgl/numerics.h"

namespace lgl::testing {

// Row reduction of an m x n system. Returns the rank; fills x when the system
// has exactly one solution.
inline int row_reduce(std::vector<std::vector<double>> a, std::vector<double> b, int n,
                      std::vector<double>* x) {
  const int m = static_cast<int>(b.size());
  int r = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < n && r < m; ++col) {
    int piv = r;
    for (int i = r + 1; i < m; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (std::abs(a[piv][col]) < 1e-10) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = a[i][col] / a[r][col];
      for (int k = col; k < n; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(col);
    ++r;
  }
  if (x) {
    x->clear();
    bool consistent = true;
    for (int i = r; i < m; ++i)
      if (std::abs(b[i]) > 1e-9) consistent = false;
    if (r == n && consistent) {
      x->assign(n, 0.0);
      for (int i = 0; i < n; ++i) (*x)[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
    }
  }
  return r;
}

// All vertices of a bounded polyhedron, found by making every equality and
// every choice of n - rank(equalities) inequalities tight.
inline std::vector<std::vector<double>> enumerate_vertices(const numerics::LinearFeasibilityProblem& p) {
  const int n = p.num_variables();
  auto dense = [&](const numerics::LinearRow& r) {
    std::vector<double> a(n, 0.0);
    for (auto [k, v] : r.coeffs) a[k] += v;
    return a;
  };
  std::vector<std::vector<double>> eq_a, in_a;
  std::vector<double> eq_b, in_b;
  for (const auto& r : p.equalities) {
    eq_a.push_back(dense(r));
    eq_b.push_back(r.rhs);
  }
  for (const auto& r : p.at_least) {
    in_a.push_back(dense(r));
    in_b.push_back(r.rhs);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    in_a.push_back(e);
    in_b.push_back(p.lower[k]);
    in_a.push_back(e);
    in_b.push_back(p.upper[k]);
  }
  const int need = n - row_reduce(eq_a, eq_b, n, nullptr);
  const int m = static_cast<int>(in_a.size());
  std::vector<std::vector<double>> out;
  std::vector<int> pick;
  auto visit = [&]() {
    auto a = eq_a;
    auto b = eq_b;
    for (int i : pick) {
      a.push_back(in_a[i]);
      b.push_back(in_b[i]);
    }
    std::vector<double> x;
    row_reduce(a, b, n, &x);
    if (x.empty() || numerics::max_violation(p, x) > 1e-9) return;
    for (const auto& v : out) {
      double d = 0.0;
      for (int k = 0; k < n; ++k) d = std::max(d, std::abs(v[k] - x[k]));
      if (d < 1e-9) return;
    }
    out.push_back(x);
  };
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(pick.size()) == need) {
      visit();
      return;
    }
    for (int i = start; i < m; ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace lgl::testing

#endif  // LGL_TESTS_ORACLES_H_
