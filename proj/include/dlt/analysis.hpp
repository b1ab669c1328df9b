#pragma once

#include <vector>

#include "dlt/dist.hpp"

namespace dlt {

struct DEOptions {
  int max_iters = 2000;
  double tol = 1e-10;
};

struct DEResult {
  // trajectory[l][i]: erasure probability of scope i after l iterations.
  std::vector<std::vector<double>> trajectory;
  std::vector<double> fixed_point;
  bool converged = false;
  int iterations = 0;
};

// Single-class recursion P <- exp[-mu ω(1-P) γ(Ω(1-P))] with
// mu = Γ'(1) Ω'(1) ε_r, from P0 = 1.
DEResult de_eep(const DegreeDistribution& omega_node, const DegreeDistribution& gamma_node,
                double epsilon_r, DEOptions opt = {});

// Weighted-selection recursion, one erasure probability per source:
// P_i <- exp[-w_i mu ω(1-P_i) γ(Σ_m q_m Ω(1-P_m))], w_i = q_i/α_i.
DEResult de_uep_weighted(const DegreeDistribution& omega_node,
                         const DegreeDistribution& gamma_node,
                         const std::vector<double>& q, const std::vector<double>& alpha,
                         double epsilon_r, DEOptions opt = {});

/// Expanding-window parameters at importance-class granularity.
struct DewltParams {
  DegreeDistribution omega;                  // node, common at all sources
  std::vector<double> theta;                 // window assignment, per window
  std::vector<double> pi;                    // class size fractions Π_i
  std::vector<double> q_class;               // selection mass aggregated per class
  std::vector<DegreeDistribution> gamma_w;   // node, one per window
  double epsilon_r = 0.0;
};

// Per-class recursion
//   P_i <- exp[-ε_r Σ_{j>=i} (θ_j / Σ_{t<=j} Π_t) Γ_jW'(A_j)],
//   A_j = Σ_{t<=j} (q_t / Σ_{t'<=j} q_t') Ω(1-P_t).
DEResult de_dewlt(const DewltParams& p, DEOptions opt = {});

// R-relay weighted recursion with per-relay Γ_j and overheads ε_{r,j}.
// With identical Γ at all relays this equals the single-relay recursion
// at the summed overhead.
DEResult de_multirelay_weighted(const DegreeDistribution& omega_node,
                                const std::vector<DegreeDistribution>& gammas,
                                const std::vector<double>& q,
                                const std::vector<double>& alpha,
                                const std::vector<double>& epsilon_r_per_relay,
                                DEOptions opt = {});

// R relays all running the same expanding-window configuration.
DEResult de_multirelay_dewlt(const DewltParams& base,
                             const std::vector<double>& epsilon_r_per_relay,
                             DEOptions opt = {});

// Window j assigned to relay j (I == R).
DEResult de_window_per_relay(const DewltParams& base,
                             const std::vector<double>& epsilon_r_per_relay,
                             DEOptions opt = {});

// ML failure lower bound (1 - Σ_{j>=i} θ_j ρ_j/κ_wj)^(K ε_r) for
// importance class i, with ρ_j = Γ_jW'(1) Ω'(1) and κ_wj the cumulative
// window size in bits.
double ml_lower_bound(const std::vector<double>& theta, const std::vector<double>& rho,
                      const std::vector<double>& kappa_w, double K, double epsilon_r,
                      int class_index);

// Probability a variable node has decoding-graph degree 0 under the
// Poisson approximation: e^(-mu).
double unconnected_fraction(double mu);

} // namespace dlt
