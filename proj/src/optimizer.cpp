#include "dlt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dlt/error.hpp"

namespace dlt {

namespace {
constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;
} // namespace

LpProblem build_lp1(const DegreeDistribution& omega_node, double mu_bar, int d_max,
                    double eps, int m) {
  if (m < 2 || d_max < 1 || eps <= 0.0 || eps >= 1.0)
    throw Error(Errc::invalid_grid, "need m >= 2, d_max >= 1, 0 < eps < 1");
  const auto omega_edge = omega_node.to_edge_perspective();
  const double omega_p1 = omega_node.mean_degree();

  LpProblem p;
  p.num_vars = d_max;
  p.target_erasure = eps;
  p.mu_bar = mu_bar;
  p.objective.resize(static_cast<std::size_t>(d_max));
  for (int j = 1; j <= d_max; ++j)
    p.objective[static_cast<std::size_t>(j - 1)] = mu_bar / omega_p1 / j;

  for (int i = 0; i < m; ++i) {
    const double x = (1.0 - eps) * i / (m - 1);
    p.grid.push_back(x);
    const double ox = omega_node.evaluate(x);
    std::vector<double> row(static_cast<std::size_t>(d_max));
    double pw = 1.0; // Ω(x)^{j-1}, with 0^0 = 1
    for (int j = 1; j <= d_max; ++j) {
      row[static_cast<std::size_t>(j - 1)] = pw;
      pw *= ox;
    }
    // The x = 0 row is the analytic limit, which is non-binding.
    const double rhs = (i == 0) ? 0.0 : -std::log1p(-x) / (mu_bar * omega_edge.evaluate(x));
    p.rows.push_back(std::move(row));
    p.rhs.push_back(rhs);
  }
  return p;
}

LpProblem build_lp2(const DegreeDistribution& omega_node, double mu_bar, int d_max,
                    double eps, int m, const std::vector<double>& q,
                    const std::vector<double>& alpha, bool literal_form) {
  if (m < 2 || d_max < 1 || eps <= 0.0 || eps >= 1.0)
    throw Error(Errc::invalid_grid, "need m >= 2, d_max >= 1, 0 < eps < 1");
  if (q.size() != alpha.size())
    throw Error(Errc::invalid_parameter, "q and alpha must have the same length");
  const auto omega_edge = omega_node.to_edge_perspective();
  const double omega_p1 = omega_node.mean_degree();
  const std::size_t S = q.size();
  std::vector<double> w(S);
  for (std::size_t i = 0; i < S; ++i) w[i] = q[i] / alpha[i];

  LpProblem p;
  p.num_vars = d_max;
  p.target_erasure = eps;
  p.mu_bar = mu_bar;
  p.objective.resize(static_cast<std::size_t>(d_max));
  for (int j = 1; j <= d_max; ++j)
    p.objective[static_cast<std::size_t>(j - 1)] = mu_bar / omega_p1 / j;

  for (int k = 0; k < m; ++k) {
    const double z = 1.0 - (1.0 - eps) * k / (m - 1); // 1 = z_1 > ... > z_m = eps
    p.grid.push_back(z);
    double phi, rhs;
    if (literal_form) {
      double inner = 0.0;
      for (std::size_t i = 0; i < S; ++i) inner += q[i] * std::pow(z, w[i]);
      phi = omega_node.evaluate(std::clamp(1.0 - inner, 0.0, 1.0));
      rhs = (k == 0) ? 0.0 : -std::log(z) / (mu_bar * omega_edge.evaluate(z));
    } else {
      phi = 0.0;
      double worst_inv_omega = 0.0;
      for (std::size_t i = 0; i < S; ++i) {
        const double zi = std::pow(z, w[i]);
        phi += q[i] * omega_node.evaluate(1.0 - zi);
        if (k > 0)
          worst_inv_omega = std::max(worst_inv_omega, 1.0 / omega_edge.evaluate(1.0 - zi));
      }
      rhs = (k == 0) ? 0.0 : -std::log(z) / mu_bar * worst_inv_omega;
    }
    std::vector<double> row(static_cast<std::size_t>(d_max));
    double pw = 1.0;
    for (int j = 1; j <= d_max; ++j) {
      row[static_cast<std::size_t>(j - 1)] = pw;
      pw *= phi;
    }
    p.rows.push_back(std::move(row));
    p.rhs.push_back(rhs);
  }
  return p;
}

namespace {

/// Dense tableau simplex with Bland's rule. Minimizes d over the
/// current columns; basis[] holds the basic column of each row.
class Tableau {
public:
  Tableau(std::vector<std::vector<double>> rows, std::vector<double> rhs)
      : t_(std::move(rows)), b_(std::move(rhs)), M_(t_.size()) {}

  std::size_t add_columns(std::size_t count) {
    const std::size_t first = t_.empty() ? 0 : t_[0].size();
    for (auto& row : t_) row.resize(row.size() + count, 0.0);
    return first;
  }

  std::size_t num_cols() const { return t_.empty() ? 0 : t_[0].size(); }
  std::size_t num_rows() const { return M_; }
  double& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  double rhs(std::size_t r) const { return b_[r]; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  void set_basis(std::vector<std::size_t> basis) { basis_ = std::move(basis); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double piv = t_[pr][pc];
    for (auto& v : t_[pr]) v /= piv;
    b_[pr] /= piv;
    for (std::size_t r = 0; r < M_; ++r) {
      if (r == pr) continue;
      const double f = t_[r][pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < t_[r].size(); ++c) t_[r][c] -= f * t_[pr][c];
      b_[r] -= f * b_[pr];
    }
    basis_[pr] = pc;
  }

  // Returns false when unbounded. `allowed(c)` filters entering columns.
  template <typename Allowed>
  bool minimize(const std::vector<double>& cost, const Allowed& allowed) {
    for (;;) {
      // Reduced costs from scratch each iteration: M is small (~100),
      // and this avoids drift in a long pivot sequence.
      std::size_t enter = SIZE_MAX;
      for (std::size_t c = 0; c < num_cols(); ++c) {
        if (!allowed(c)) continue;
        bool basic = false;
        for (auto bcol : basis_)
          if (bcol == c) basic = true;
        if (basic) continue;
        double rc = cost[c];
        for (std::size_t r = 0; r < M_; ++r) rc -= cost[basis_[r]] * t_[r][c];
        if (rc < -kCostTol) {
          enter = c; // Bland: first eligible index
          break;
        }
      }
      if (enter == SIZE_MAX) return true;
      std::size_t leave = SIZE_MAX;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < M_; ++r) {
        if (t_[r][enter] > kPivotTol) {
          const double ratio = b_[r] / t_[r][enter];
          if (ratio < best - kPivotTol ||
              (ratio < best + kPivotTol &&
               (leave == SIZE_MAX || basis_[r] < basis_[leave]))) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == SIZE_MAX) return false;
      pivot(leave, enter);
    }
  }

  double objective(const std::vector<double>& cost) const {
    double z = 0.0;
    for (std::size_t r = 0; r < M_; ++r) z += cost[basis_[r]] * b_[r];
    return z;
  }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<long>(r));
    b_.erase(b_.begin() + static_cast<long>(r));
    basis_.erase(basis_.begin() + static_cast<long>(r));
    --M_;
  }

private:
  std::vector<std::vector<double>> t_;
  std::vector<double> b_;
  std::size_t M_;
  std::vector<std::size_t> basis_;
};

} // namespace

LpSolution solve_lp(const LpProblem& p) {
  const std::size_t n = static_cast<std::size_t>(p.num_vars);
  const std::size_t k = p.rows.size();
  const std::size_t M = k + 1; // inequalities plus the normalization equality

  // Equality system: [A | -I] [γ; s] = b, Σ γ = 1.
  std::vector<std::vector<double>> rows(M, std::vector<double>(n + k, 0.0));
  std::vector<double> rhs(M, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < n; ++c) rows[r][c] = p.rows[r][c];
    rows[r][n + r] = -1.0;
    rhs[r] = p.rhs[r];
  }
  for (std::size_t c = 0; c < n; ++c) rows[k][c] = 1.0;
  rhs[k] = 1.0;
  for (std::size_t r = 0; r < M; ++r) {
    if (rhs[r] < 0.0) {
      for (auto& v : rows[r]) v = -v;
      rhs[r] = -rhs[r];
    }
  }

  Tableau tab(std::move(rows), std::move(rhs));
  const std::size_t art0 = tab.add_columns(M);
  std::vector<std::size_t> basis(M);
  for (std::size_t r = 0; r < M; ++r) {
    tab.at(r, art0 + r) = 1.0;
    basis[r] = art0 + r;
  }
  tab.set_basis(std::move(basis));

  // Phase 1.
  std::vector<double> phase1(tab.num_cols(), 0.0);
  for (std::size_t c = art0; c < tab.num_cols(); ++c) phase1[c] = 1.0;
  tab.minimize(phase1, [](std::size_t) { return true; });

  LpSolution sol;
  if (tab.objective(phase1) > 1e-7) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  // Drive remaining artificials out of the basis; redundant rows are dropped.
  for (std::size_t r = tab.num_rows(); r-- > 0;) {
    if (tab.basis()[r] < art0) continue;
    std::size_t pc = SIZE_MAX;
    for (std::size_t c = 0; c < art0; ++c) {
      if (std::abs(tab.at(r, c)) > kPivotTol) {
        pc = c;
        break;
      }
    }
    if (pc == SIZE_MAX)
      tab.drop_row(r);
    else
      tab.pivot(r, pc);
  }

  // Phase 2 over the structural and surplus columns only.
  std::vector<double> phase2(tab.num_cols(), 0.0);
  for (std::size_t c = 0; c < n; ++c) phase2[c] = p.objective[c];
  if (!tab.minimize(phase2, [&](std::size_t c) { return c < art0; })) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.gamma_edge.assign(n, 0.0);
  for (std::size_t r = 0; r < tab.num_rows(); ++r)
    if (tab.basis()[r] < n) sol.gamma_edge[tab.basis()[r]] = tab.rhs(r);
  sol.objective_value = tab.objective(phase2);
  return sol;
}

namespace {

OptimizedRelayDistribution finish_pipeline(const LpProblem& problem,
                                           const DegreeDistribution& omega_node,
                                           const std::vector<double>* q,
                                           const std::vector<double>* alpha) {
  const LpSolution sol = solve_lp(problem);
  if (sol.status != LpStatus::optimal)
    throw Error(Errc::validation_failed, sol.status == LpStatus::infeasible
                                             ? "LP infeasible"
                                             : "LP unbounded");
  std::vector<double> gamma = sol.gamma_edge;
  double sum = 0.0;
  for (double& g : gamma) {
    if (g < 0.0) {
      if (g < -1e-9) throw Error(Errc::validation_failed, "negative mass in LP solution");
      g = 0.0;
    }
    sum += g;
  }
  if (std::abs(sum - 1.0) > 1e-7)
    throw Error(Errc::validation_failed, "LP solution not normalized");
  for (double& g : gamma) g /= sum;

  OptimizedRelayDistribution out{
      DegreeDistribution(gamma, Perspective::edge, DistKind::relay),
      DegreeDistribution(gamma, Perspective::edge, DistKind::relay).to_node_perspective(),
      sol.objective_value, false, 0.0};

  const double er_check = 1.02 * out.epsilon_r_star;
  const double eps = problem.target_erasure;
  double worst = -std::numeric_limits<double>::infinity();
  if (q == nullptr) {
    const auto de = de_eep(omega_node, out.gamma_node, er_check);
    worst = de.fixed_point[0] - eps;
  } else {
    const auto de = de_uep_weighted(omega_node, out.gamma_node, *q, *alpha, er_check);
    for (std::size_t i = 0; i < q->size(); ++i) {
      const double target = std::pow(eps, (*q)[i] / (*alpha)[i]);
      worst = std::max(worst, de.fixed_point[i] - target);
    }
  }
  out.de_worst_excess = worst;
  out.de_validated = worst <= 1e-9;
  return out;
}

} // namespace

OptimizedRelayDistribution optimize_relay_distribution_eep(
    const DegreeDistribution& omega_node, double mu_bar, int d_max, double eps, int m) {
  return finish_pipeline(build_lp1(omega_node, mu_bar, d_max, eps, m), omega_node,
                         nullptr, nullptr);
}

OptimizedRelayDistribution optimize_relay_distribution_uep(
    const DegreeDistribution& omega_node, double mu_bar, int d_max, double eps, int m,
    const std::vector<double>& q, const std::vector<double>& alpha, bool literal_form) {
  return finish_pipeline(build_lp2(omega_node, mu_bar, d_max, eps, m, q, alpha, literal_form),
                         omega_node, &q, &alpha);
}

} // namespace dlt
