#include "dlt/analysis.hpp"

#include <cmath>
#include <functional>

#include "dlt/error.hpp"

namespace dlt {

namespace {

DEResult iterate(std::size_t n,
                 const std::function<void(const std::vector<double>&, std::vector<double>&)>& step,
                 const DEOptions& opt) {
  DEResult r;
  std::vector<double> p(n, 1.0), next(n, 0.0);
  r.trajectory.push_back(p);
  for (int l = 1; l <= opt.max_iters; ++l) {
    step(p, next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - p[i]));
    p = next;
    r.trajectory.push_back(p);
    r.iterations = l;
    if (change < opt.tol) {
      r.converged = true;
      break;
    }
  }
  r.fixed_point = p;
  return r;
}

} // namespace

DEResult de_eep(const DegreeDistribution& omega_node, const DegreeDistribution& gamma_node,
                double epsilon_r, DEOptions opt) {
  return de_uep_weighted(omega_node, gamma_node, {1.0}, {1.0}, epsilon_r, opt);
}

DEResult de_uep_weighted(const DegreeDistribution& omega_node,
                         const DegreeDistribution& gamma_node,
                         const std::vector<double>& q, const std::vector<double>& alpha,
                         double epsilon_r, DEOptions opt) {
  const std::size_t S = q.size();
  if (alpha.size() != S)
    throw Error(Errc::invalid_parameter, "q and alpha must have the same length");
  const auto omega_edge = omega_node.to_edge_perspective();
  const auto gamma_edge = gamma_node.to_edge_perspective();
  const double mu_bar = gamma_node.mean_degree() * omega_node.mean_degree() * epsilon_r;
  std::vector<double> w(S);
  for (std::size_t i = 0; i < S; ++i) w[i] = q[i] / alpha[i];

  auto step = [&](const std::vector<double>& p, std::vector<double>& next) {
    double arg = 0.0;
    for (std::size_t m = 0; m < S; ++m) arg += q[m] * omega_node.evaluate(1.0 - p[m]);
    const double g = gamma_edge.evaluate(arg);
    for (std::size_t i = 0; i < S; ++i)
      next[i] = std::exp(-w[i] * mu_bar * omega_edge.evaluate(1.0 - p[i]) * g);
  };
  return iterate(S, step, opt);
}

namespace {

// Window-j argument: q restricted to classes 1..j, renormalized.
double window_argument(const DewltParams& p, int j, const std::vector<double>& erasure) {
  double qsum = 0.0;
  for (int t = 0; t < j; ++t) qsum += p.q_class[static_cast<std::size_t>(t)];
  double arg = 0.0;
  for (int t = 0; t < j; ++t)
    arg += p.q_class[static_cast<std::size_t>(t)] / qsum *
           p.omega.evaluate(1.0 - erasure[static_cast<std::size_t>(t)]);
  return arg;
}

double cumulative_pi(const DewltParams& p, int j) {
  double s = 0.0;
  for (int t = 0; t < j; ++t) s += p.pi[static_cast<std::size_t>(t)];
  return s;
}

} // namespace

DEResult de_dewlt(const DewltParams& p, DEOptions opt) {
  const int I = static_cast<int>(p.theta.size());
  if (p.pi.size() != p.theta.size() || p.q_class.size() != p.theta.size() ||
      p.gamma_w.size() != p.theta.size())
    throw Error(Errc::invalid_parameter, "theta, pi, q_class, gamma_w sizes must match");

  auto step = [&](const std::vector<double>& cur, std::vector<double>& next) {
    std::vector<double> term(static_cast<std::size_t>(I));
    for (int j = 1; j <= I; ++j)
      term[static_cast<std::size_t>(j - 1)] =
          p.theta[static_cast<std::size_t>(j - 1)] / cumulative_pi(p, j) *
          p.gamma_w[static_cast<std::size_t>(j - 1)].derivative(window_argument(p, j, cur));
    for (int i = 1; i <= I; ++i) {
      double expo = 0.0;
      for (int j = i; j <= I; ++j) expo += term[static_cast<std::size_t>(j - 1)];
      next[static_cast<std::size_t>(i - 1)] = std::exp(-p.epsilon_r * expo);
    }
  };
  return iterate(static_cast<std::size_t>(I), step, opt);
}

DEResult de_multirelay_weighted(const DegreeDistribution& omega_node,
                                const std::vector<DegreeDistribution>& gammas,
                                const std::vector<double>& q,
                                const std::vector<double>& alpha,
                                const std::vector<double>& epsilon_r_per_relay,
                                DEOptions opt) {
  if (gammas.size() != epsilon_r_per_relay.size())
    throw Error(Errc::invalid_parameter, "one overhead per relay required");
  const std::size_t S = q.size();
  std::vector<double> w(S);
  for (std::size_t i = 0; i < S; ++i) w[i] = q[i] / alpha[i];

  auto step = [&](const std::vector<double>& p, std::vector<double>& next) {
    double arg = 0.0;
    for (std::size_t m = 0; m < S; ++m) arg += q[m] * omega_node.evaluate(1.0 - p[m]);
    double relay_sum = 0.0;
    for (std::size_t j = 0; j < gammas.size(); ++j)
      relay_sum += epsilon_r_per_relay[j] * gammas[j].derivative(arg);
    for (std::size_t i = 0; i < S; ++i)
      next[i] = std::exp(-w[i] * omega_node.derivative(1.0 - p[i]) * relay_sum);
  };
  return iterate(S, step, opt);
}

DEResult de_multirelay_dewlt(const DewltParams& base,
                             const std::vector<double>& epsilon_r_per_relay,
                             DEOptions opt) {
  DewltParams p = base;
  p.epsilon_r = 0.0;
  for (double e : epsilon_r_per_relay) p.epsilon_r += e;
  return de_dewlt(p, opt);
}

DEResult de_window_per_relay(const DewltParams& base,
                             const std::vector<double>& epsilon_r_per_relay,
                             DEOptions opt) {
  const int R = static_cast<int>(epsilon_r_per_relay.size());
  if (base.gamma_w.size() != static_cast<std::size_t>(R))
    throw Error(Errc::invalid_parameter, "window-per-relay needs I == R");

  auto step = [&](const std::vector<double>& cur, std::vector<double>& next) {
    std::vector<double> term(static_cast<std::size_t>(R));
    for (int j = 1; j <= R; ++j)
      term[static_cast<std::size_t>(j - 1)] =
          epsilon_r_per_relay[static_cast<std::size_t>(j - 1)] / cumulative_pi(base, j) *
          base.gamma_w[static_cast<std::size_t>(j - 1)].derivative(
              window_argument(base, j, cur));
    for (int i = 1; i <= R; ++i) {
      double expo = 0.0;
      for (int j = i; j <= R; ++j) expo += term[static_cast<std::size_t>(j - 1)];
      next[static_cast<std::size_t>(i - 1)] = std::exp(-expo);
    }
  };
  return iterate(static_cast<std::size_t>(R), step, opt);
}

double ml_lower_bound(const std::vector<double>& theta, const std::vector<double>& rho,
                      const std::vector<double>& kappa_w, double K, double epsilon_r,
                      int class_index) {
  const int I = static_cast<int>(theta.size());
  if (class_index < 1 || class_index > I)
    throw Error(Errc::argument_out_of_range, "class index outside 1..I");
  double s = 0.0;
  for (int j = class_index; j <= I; ++j)
    s += theta[static_cast<std::size_t>(j - 1)] * rho[static_cast<std::size_t>(j - 1)] /
         kappa_w[static_cast<std::size_t>(j - 1)];
  if (s > 1.0) throw Error(Errc::argument_out_of_range, "coverage sum exceeds 1");
  return std::pow(1.0 - s, K * epsilon_r);
}

double unconnected_fraction(double mu) {
  if (mu < 0.0) throw Error(Errc::invalid_parameter, "mu must be nonnegative");
  return std::exp(-mu);
}

} // namespace dlt
