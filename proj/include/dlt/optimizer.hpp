#pragma once

#include <vector>

#include "dlt/analysis.hpp"
#include "dlt/dist.hpp"

namespace dlt {

/// minimize c.γ  subject to  A γ >= b,  Σ γ_j = 1,  γ >= 0.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows; // inequality lhs
  std::vector<double> rhs;
  std::vector<double> grid;
  double target_erasure = 0.0;
  double mu_bar = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  std::vector<double> gamma_edge;
  double objective_value = 0.0;
  LpStatus status = LpStatus::infeasible;
};

// Relay-degree design for EEP: constraints γ(Ω(x)) >= -ln(1-x)/(mu ω(x))
// on m equidistant points of [0, 1-eps]; the x=0 row degenerates to the
// trivially satisfied limit row.
LpProblem build_lp1(const DegreeDistribution& omega_node, double mu_bar, int d_max,
                    double eps, int m);

// Weighted-UEP variant over m equidistant points z on [eps, 1], z
// descending from 1. The default constraint argument is the
// density-evolution-consistent Φ(z) = Σ_i q_i Ω(1-z^{w_i}); with
// literal_form the argument is Ω(1 - Σ_i q_i z^{w_i}) and the
// right-hand side uses ω(z) as printed.
LpProblem build_lp2(const DegreeDistribution& omega_node, double mu_bar, int d_max,
                    double eps, int m, const std::vector<double>& q,
                    const std::vector<double>& alpha, bool literal_form = false);

// Dense two-phase simplex, Bland's rule.
LpSolution solve_lp(const LpProblem& p);

struct OptimizedRelayDistribution {
  DegreeDistribution gamma_edge;
  DegreeDistribution gamma_node;
  double epsilon_r_star = 0.0;
  bool de_validated = false;
  double de_worst_excess = 0.0; // max over scopes of fixed point minus its target
};

// build -> solve -> node conversion -> density-evolution validation at
// 1.02 * ε_r*. Validation failure is reported in the result, never
// silently accepted. For the UEP pipeline the per-source targets are
// eps^{w_i}.
OptimizedRelayDistribution optimize_relay_distribution_eep(
    const DegreeDistribution& omega_node, double mu_bar, int d_max, double eps, int m);

OptimizedRelayDistribution optimize_relay_distribution_uep(
    const DegreeDistribution& omega_node, double mu_bar, int d_max, double eps, int m,
    const std::vector<double>& q, const std::vector<double>& alpha,
    bool literal_form = false);

} // namespace dlt
