#include "lgl/numerics.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace lgl::numerics {

double LinearRow::evaluate(const std::vector<double>& x) const {
  double total = 0.0;
  for (const auto& [index, coeff] : coeffs) total += coeff * x[index];
  return total;
}

int LinearFeasibilityProblem::add_variable(double lo, double hi) {
  lower.push_back(lo);
  upper.push_back(hi);
  return static_cast<int>(lower.size()) - 1;
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-11;
constexpr double kTieTol = 1e-13;

void check_well_formed(const LinearFeasibilityProblem& p) {
  if (p.lower.size() != p.upper.size()) {
    throw std::invalid_argument("solve_feasibility: bound vectors differ in length");
  }
  const int n = p.num_variables();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(p.lower[j]) || !std::isfinite(p.upper[j])) {
      throw std::invalid_argument("solve_feasibility: variable " + std::to_string(j) +
                                  " has an infinite bound");
    }
    if (p.lower[j] > p.upper[j]) {
      throw std::invalid_argument("solve_feasibility: variable " + std::to_string(j) +
                                  " has lower > upper");
    }
  }
  auto check_rows = [n](const std::vector<LinearRow>& rows) {
    for (const auto& row : rows) {
      if (!std::isfinite(row.rhs)) throw std::invalid_argument("solve_feasibility: non-finite rhs");
      for (const auto& [index, coeff] : row.coeffs) {
        if (index < 0 || index >= n) throw std::invalid_argument("solve_feasibility: bad column index");
        if (!std::isfinite(coeff)) throw std::invalid_argument("solve_feasibility: non-finite coefficient");
      }
    }
  };
  check_rows(p.equalities);
  check_rows(p.at_least);
}

// Dense tableau for the phase-1 program
//   min sum r  s.t.  A x' - E e + diag(sign) r = b - A l,
// with x' = x - l in [0, u - l], surplus e >= 0 on covering rows and
// artificials r >= 0.
class PhaseOneTableau {
 public:
  explicit PhaseOneTableau(const LinearFeasibilityProblem& p) : problem_(p) {
    n_ = p.num_variables();
    num_eq_ = static_cast<int>(p.equalities.size());
    m_ = num_eq_ + static_cast<int>(p.at_least.size());
    num_surplus_ = m_ - num_eq_;
    cols_ = n_ + num_surplus_ + m_;

    table_.assign(static_cast<size_t>(m_) * cols_, 0.0);
    upper_.assign(cols_, kInfinity);
    value_.assign(cols_, 0.0);
    at_upper_.assign(cols_, false);
    cost_.assign(cols_, 0.0);
    basis_.assign(m_, 0);
    sign_.assign(m_, 1.0);
    for (int j = 0; j < n_; ++j) upper_[j] = p.upper[j] - p.lower[j];

    for (int i = 0; i < m_; ++i) {
      const LinearRow& row = i < num_eq_ ? p.equalities[i] : p.at_least[i - num_eq_];
      double rhs = row.rhs;
      for (const auto& [index, coeff] : row.coeffs) {
        rhs -= coeff * p.lower[index];
        max_abs_entry_ = std::max(max_abs_entry_, std::abs(coeff));
      }
      sign_[i] = rhs >= 0.0 ? 1.0 : -1.0;
      for (const auto& [index, coeff] : row.coeffs) at(i, index) += sign_[i] * coeff;
      if (i >= num_eq_) at(i, n_ + (i - num_eq_)) = -sign_[i];
      const int art = artificial(i);
      at(i, art) = 1.0;
      cost_[art] = 1.0;
      basis_[i] = art;
      value_[art] = std::abs(rhs);
    }
    reduced_.assign(cols_, 0.0);
    for (int j = 0; j < cols_; ++j) {
      double d = cost_[j];
      for (int i = 0; i < m_; ++i) d -= cost_[basis_[i]] * at(i, j);
      reduced_[j] = d;
    }
    is_basic_.assign(cols_, false);
    for (int i = 0; i < m_; ++i) is_basic_[basis_[i]] = true;
  }

  int run() {
    const long long cap = 50000LL + 200LL * (m_ + cols_);
    int pivots = 0;
    for (long long iter = 0; iter < cap; ++iter) {
      const int entering = choose_entering();
      if (entering < 0) return pivots;
      if (step(entering)) ++pivots;
    }
    std::ostringstream os;
    os << "solve_feasibility: iteration cap reached (" << cap << " steps, " << m_
       << " rows, " << cols_ << " columns)";
    throw NumericalError(os.str());
  }

  double infeasibility() const {
    double w = 0.0;
    for (int i = 0; i < m_; ++i) w += value_[artificial(i)];
    return w;
  }

  std::vector<double> point() const {
    std::vector<double> x(n_);
    for (int j = 0; j < n_; ++j) {
      x[j] = std::clamp(problem_.lower[j] + value_[j], problem_.lower[j], problem_.upper[j]);
    }
    return x;
  }

  FarkasCertificate certificate() const {
    FarkasCertificate cert;
    cert.equality_multipliers.resize(num_eq_);
    cert.at_least_multipliers.resize(num_surplus_);
    for (int i = 0; i < m_; ++i) {
      const double y = (1.0 - reduced_[artificial(i)]) * sign_[i];
      if (i < num_eq_) {
        cert.equality_multipliers[i] = y;
      } else {
        cert.at_least_multipliers[i - num_eq_] = std::max(0.0, y);
      }
    }
    cert.gap = certificate_gap(problem_, cert);
    return cert;
  }

  double min_pivot() const { return min_pivot_; }
  double max_abs_entry() const { return max_abs_entry_; }

 private:
  double& at(int i, int j) { return table_[static_cast<size_t>(i) * cols_ + j]; }
  double at(int i, int j) const { return table_[static_cast<size_t>(i) * cols_ + j]; }
  int artificial(int row) const { return n_ + num_surplus_ + row; }

  int choose_entering() const {
    for (int j = 0; j < cols_; ++j) {
      if (is_basic_[j]) continue;
      if (!at_upper_[j] && reduced_[j] < -kReducedCostTol && upper_[j] > 0.0) return j;
      if (at_upper_[j] && reduced_[j] > kReducedCostTol) return j;
    }
    return -1;
  }

  // Returns true when a basis change happened, false on a bound flip.
  bool step(int entering) {
    const double dir = at_upper_[entering] ? -1.0 : 1.0;
    int leave_row = -1;
    double best = kInfinity;
    bool leave_to_upper = false;
    for (int i = 0; i < m_; ++i) {
      const double rate = -at(i, entering) * dir;
      const int var = basis_[i];
      double limit = kInfinity;
      bool to_upper = false;
      if (rate < -kPivotTol) {
        limit = std::max(0.0, value_[var]) / -rate;
      } else if (rate > kPivotTol && std::isfinite(upper_[var])) {
        limit = std::max(0.0, upper_[var] - value_[var]) / rate;
        to_upper = true;
      } else {
        continue;
      }
      if (limit < best - kTieTol ||
          (limit <= best + kTieTol && leave_row >= 0 && var < basis_[leave_row])) {
        best = limit;
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }

    const double flip = upper_[entering];
    if (flip <= best) {
      if (!std::isfinite(flip)) {
        throw NumericalError("solve_feasibility: unbounded phase-1 direction");
      }
      move(entering, dir, flip);
      at_upper_[entering] = !at_upper_[entering];
      value_[entering] = at_upper_[entering] ? upper_[entering] : 0.0;
      return false;
    }

    move(entering, dir, best);
    const int leaving = basis_[leave_row];
    value_[leaving] = leave_to_upper ? upper_[leaving] : 0.0;
    at_upper_[leaving] = leave_to_upper;
    pivot(leave_row, entering);
    return true;
  }

  void move(int entering, double dir, double theta) {
    if (theta == 0.0) return;
    value_[entering] += dir * theta;
    for (int i = 0; i < m_; ++i) value_[basis_[i]] -= at(i, entering) * dir * theta;
  }

  void pivot(int row, int col) {
    const double piv = at(row, col);
    if (std::abs(piv) < kPivotTol) {
      std::ostringstream os;
      os << "solve_feasibility: pivot " << piv << " below tolerance; largest coefficient "
         << max_abs_entry_ << ", condition estimate " << max_abs_entry_ / std::abs(piv);
      throw NumericalError(os.str());
    }
    min_pivot_ = std::min(min_pivot_, std::abs(piv));
    for (int j = 0; j < cols_; ++j) at(row, j) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = at(i, col);
      if (factor == 0.0) continue;
      for (int j = 0; j < cols_; ++j) at(i, j) -= factor * at(row, j);
      at(i, col) = 0.0;
    }
    const double factor = reduced_[col];
    if (factor != 0.0) {
      for (int j = 0; j < cols_; ++j) reduced_[j] -= factor * at(row, j);
      reduced_[col] = 0.0;
    }
    is_basic_[basis_[row]] = false;
    basis_[row] = col;
    is_basic_[col] = true;
    at_upper_[col] = false;
  }

  const LinearFeasibilityProblem& problem_;
  int n_ = 0, m_ = 0, num_eq_ = 0, num_surplus_ = 0, cols_ = 0;
  std::vector<double> table_;
  std::vector<double> upper_, value_, cost_, reduced_, sign_;
  std::vector<bool> at_upper_, is_basic_;
  std::vector<int> basis_;
  double min_pivot_ = kInfinity;
  double max_abs_entry_ = 0.0;
};

}  // namespace

double max_violation(const LinearFeasibilityProblem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < problem.num_variables(); ++j) {
    worst = std::max({worst, problem.lower[j] - x[j], x[j] - problem.upper[j]});
  }
  for (const auto& row : problem.equalities) {
    worst = std::max(worst, std::abs(row.evaluate(x) - row.rhs));
  }
  for (const auto& row : problem.at_least) {
    worst = std::max(worst, row.rhs - row.evaluate(x));
  }
  return worst;
}

double certificate_gap(const LinearFeasibilityProblem& problem,
                       const FarkasCertificate& certificate) {
  const int n = problem.num_variables();
  std::vector<double> combined(n, 0.0);
  double rhs = 0.0;
  auto accumulate = [&](const std::vector<LinearRow>& rows, const std::vector<double>& y) {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& [index, coeff] : rows[i].coeffs) combined[index] += y[i] * coeff;
      rhs += y[i] * rows[i].rhs;
    }
  };
  if (certificate.equality_multipliers.size() != problem.equalities.size() ||
      certificate.at_least_multipliers.size() != problem.at_least.size()) {
    return -kInfinity;
  }
  for (double y : certificate.at_least_multipliers) {
    if (y < 0.0) return -kInfinity;
  }
  accumulate(problem.equalities, certificate.equality_multipliers);
  accumulate(problem.at_least, certificate.at_least_multipliers);
  double box_max = 0.0;
  for (int j = 0; j < n; ++j) {
    box_max += combined[j] * (combined[j] >= 0.0 ? problem.upper[j] : problem.lower[j]);
  }
  return rhs - box_max;
}

FeasibilityResult solve_feasibility(const LinearFeasibilityProblem& problem, double tol) {
  check_well_formed(problem);
  PhaseOneTableau tableau(problem);
  FeasibilityResult result;
  result.pivots = tableau.run();
  const double w = tableau.infeasibility();
  if (w <= tol) {
    result.feasible = true;
    result.point = tableau.point();
    const double violation = max_violation(problem, result.point);
    if (violation > 100.0 * tol) {
      std::ostringstream os;
      os << "solve_feasibility: phase-1 optimum " << w << " but recovered point violates "
         << "constraints by " << violation << "; smallest pivot " << tableau.min_pivot()
         << ", largest coefficient " << tableau.max_abs_entry();
      throw NumericalError(os.str());
    }
  } else {
    result.feasible = false;
    result.certificate = tableau.certificate();
  }
  return result;
}

int FlowNetwork::add_arc(int from, int to, double capacity) {
  arcs.push_back({from, to, capacity});
  return static_cast<int>(arcs.size()) - 1;
}

namespace {

constexpr double kFlowEps = 1e-15;

class Dinic {
 public:
  explicit Dinic(const FlowNetwork& net) : net_(net), head_(net.num_nodes, -1) {
    for (size_t k = 0; k < net.arcs.size(); ++k) {
      const Arc& a = net.arcs[k];
      if (a.from < 0 || a.from >= net.num_nodes || a.to < 0 || a.to >= net.num_nodes) {
        throw std::invalid_argument("max_flow: arc endpoint out of range");
      }
      if (!(a.capacity >= 0.0) || !std::isfinite(a.capacity)) {
        throw std::invalid_argument("max_flow: capacities must be finite and nonnegative");
      }
      add_edge(a.from, a.to, a.capacity);
      add_edge(a.to, a.from, 0.0);
    }
  }

  FlowResult run() {
    FlowResult result;
    if (net_.source == net_.sink) {
      throw std::invalid_argument("max_flow: source equals sink");
    }
    while (bfs()) {
      iter_.assign(head_.begin(), head_.end());
      while (true) {
        const double pushed = dfs(net_.source, kInfinity);
        if (pushed <= kFlowEps) break;
        result.value += pushed;
      }
    }
    result.flow.resize(net_.arcs.size());
    for (size_t k = 0; k < net_.arcs.size(); ++k) {
      result.flow[k] = std::clamp(net_.arcs[k].capacity - cap_[2 * k], 0.0, net_.arcs[k].capacity);
    }
    result.source_side.assign(net_.num_nodes, false);
    for (int v = 0; v < net_.num_nodes; ++v) result.source_side[v] = level_[v] >= 0;
    return result;
  }

 private:
  void add_edge(int from, int to, double cap) {
    to_.push_back(to);
    cap_.push_back(cap);
    next_.push_back(head_[from]);
    head_[from] = static_cast<int>(to_.size()) - 1;
  }

  bool bfs() {
    level_.assign(net_.num_nodes, -1);
    std::queue<int> queue;
    level_[net_.source] = 0;
    queue.push(net_.source);
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int e = head_[v]; e >= 0; e = next_[e]) {
        if (cap_[e] > kFlowEps && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[v] + 1;
          queue.push(to_[e]);
        }
      }
    }
    return level_[net_.sink] >= 0;
  }

  double dfs(int v, double limit) {
    if (v == net_.sink) return limit;
    for (int& e = iter_[v]; e >= 0; e = next_[e]) {
      const int w = to_[e];
      if (cap_[e] <= kFlowEps || level_[w] != level_[v] + 1) continue;
      const double pushed = dfs(w, std::min(limit, cap_[e]));
      if (pushed > kFlowEps) {
        cap_[e] -= pushed;
        cap_[e ^ 1] += pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  const FlowNetwork& net_;
  std::vector<int> head_, next_, to_, iter_, level_;
  std::vector<double> cap_;
};

}  // namespace

FlowResult max_flow(const FlowNetwork& network) { return Dinic(network).run(); }

}  // namespace lgl::numerics
