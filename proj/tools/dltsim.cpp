// Command-line front end: simulate, de, optimize, bound.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlt/harness.hpp"
#include "dlt/optimizer.hpp"

namespace {

std::vector<double> read_numbers(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw dlt::Error(dlt::Errc::io_error, "cannot open " + path);
  std::vector<double> out;
  double v;
  while (f >> v) out.push_back(v);
  return out;
}

// Reception overhead per transmitted check: the scheduled relay's output
// survives its destination link with probability 1 - delta. All policies
// here give each relay an equal share of transmissions.
double delivery_rate(const dlt::ExperimentConfig& cfg) {
  double s = 0.0;
  for (double d : cfg.delta_rd) s += 1.0 - d;
  return s / static_cast<double>(cfg.delta_rd.size());
}

std::vector<double> reception_grid(const dlt::ExperimentConfig& cfg) {
  const double r = delivery_rate(cfg);
  std::vector<double> grid;
  for (double e : cfg.overheads) grid.push_back(e * r);
  return grid;
}

void run_simulate(const std::string& config_path, const std::string& out_path,
                  std::uint64_t* seed, int* trials) {
  auto cfg = dlt::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  dlt::emit_csv(dlt::run_experiment(cfg), out_path);
}

void run_de(const std::string& config_path, const std::string& out_path) {
  const auto cfg = dlt::load_config(config_path);
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw dlt::Error(dlt::Errc::io_error, "cannot write " + out_path);
  f << "epsilon_r,scope,P_fixed,iterations,converged\n";
  char buf[160];
  for (double er : reception_grid(cfg)) {
    const auto point = dlt::de_point(cfg, er);
    for (const auto& row : point.rows) {
      std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g,%d,%d\n", er, row.scope.c_str(),
                    row.erasure_rate, point.iterations, point.converged ? 1 : 0);
      f << buf;
    }
  }
}

void run_bound(const std::string& config_path, const std::string& out_path) {
  const auto cfg = dlt::load_config(config_path);
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw dlt::Error(dlt::Errc::io_error, "cannot write " + out_path);
  f << "epsilon_r,scope,bound\n";
  char buf[128];
  for (const auto& row : dlt::bound_curve(cfg, reception_grid(cfg))) {
    std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g\n", row.overhead, row.scope.c_str(),
                  row.erasure_rate);
    f << buf;
  }
}

struct OptimizeArgs {
  std::string omega_path;
  double mu = 0.0;
  int dmax = 0;
  double eps = 0.0;
  int grid = 0;
  bool uep = false;
  std::string q_path, alpha_path;
  bool lp2_literal = false;
  std::string out_path;
};

void run_optimize(const OptimizeArgs& a) {
  const auto omega = dlt::DegreeDistribution::load_file(a.omega_path, dlt::Perspective::node,
                                                       dlt::DistKind::check);
  dlt::OptimizedRelayDistribution result =
      a.uep ? dlt::optimize_relay_distribution_uep(omega, a.mu, a.dmax, a.eps, a.grid,
                                                   read_numbers(a.q_path),
                                                   read_numbers(a.alpha_path), a.lp2_literal)
            : dlt::optimize_relay_distribution_eep(omega, a.mu, a.dmax, a.eps, a.grid);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out_path.empty()) {
    file.open(a.out_path, std::ios::binary);
    if (!file) throw dlt::Error(dlt::Errc::io_error, "cannot write " + a.out_path);
    os = &file;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "# epsilon_r_star = %.10g\n", result.epsilon_r_star);
  *os << buf << "# perspective = node\n";
  result.gamma_node.save(*os);
  if (!result.de_validated)
    throw dlt::Error(dlt::Errc::validation_failed, "density-evolution validation failed");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed LT code simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  int trials = 0;
  bool have_seed = false, have_trials = false;

  auto* sim = app.add_subcommand("simulate", "run Monte-Carlo trials and emit a CSV curve");
  sim->add_option("--config", config_path)->required();
  sim->add_option("--out", out_path)->required();
  sim->add_option("--seed", seed)->each([&](const std::string&) { have_seed = true; });
  sim->add_option("--trials", trials)->each([&](const std::string&) { have_trials = true; });

  auto* de = app.add_subcommand("de", "density-evolution predictions for a config");
  de->add_option("--config", config_path)->required();
  de->add_option("--out", out_path)->required();

  auto* bound = app.add_subcommand("bound", "ML lower-bound curves for a windowed config");
  bound->add_option("--config", config_path)->required();
  bound->add_option("--out", out_path)->required();

  OptimizeArgs oa;
  auto* opt = app.add_subcommand("optimize", "LP design of the relay-degree distribution");
  opt->add_option("--omega", oa.omega_path)->required();
  opt->add_option("--mu", oa.mu)->required();
  opt->add_option("--dmax", oa.dmax)->required();
  opt->add_option("--eps", oa.eps)->required();
  opt->add_option("--grid", oa.grid)->required();
  opt->add_flag("--uep", oa.uep);
  opt->add_option("--q", oa.q_path);
  opt->add_option("--alpha", oa.alpha_path);
  opt->add_flag("--lp2-literal", oa.lp2_literal);
  opt->add_option("--out", oa.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed())
      run_simulate(config_path, out_path, have_seed ? &seed : nullptr,
                   have_trials ? &trials : nullptr);
    else if (de->parsed())
      run_de(config_path, out_path);
    else if (bound->parsed())
      run_bound(config_path, out_path);
    else if (opt->parsed()) {
      if (oa.uep && (oa.q_path.empty() || oa.alpha_path.empty())) {
        std::cerr << "--uep requires --q and --alpha\n";
        return 1;
      }
      run_optimize(oa);
    }
  } catch (const dlt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == dlt::Errc::config_invalid || e.code() == dlt::Errc::io_error ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
