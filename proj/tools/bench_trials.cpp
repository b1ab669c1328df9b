// Compares the OpenMP trial loop against the serial reference and checks
// that both produce bit-identical output.
#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "dlt/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel trial-loop benchmark"};
  int trials = 32;
  long k = 4000;
  std::uint64_t seed = 7;
  app.add_option("--trials", trials);
  app.add_option("--k", k);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  dlt::ExperimentConfig cfg;
  cfg.num_sources = 4;
  cfg.num_relays = 1;
  cfg.depth = 4;
  cfg.block_lengths.assign(4, k / 4);
  cfg.scheme = dlt::RelayScheme::shift_buffer;
  cfg.omega = dlt::DegreeDistribution::robust_soliton(100, 0.05, 0.5).coefficients();
  cfg.gamma = {0.7520, 0.1685, 0.0455, 0.0340};
  cfg.q.assign(4, 0.25);
  cfg.delta_sr.assign(1, std::vector<double>(4, 0.0));
  cfg.delta_rd = {0.1};
  cfg.overheads = {1.0, 1.5, 2.0};
  cfg.trials = trials;
  cfg.seed = seed;

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto serial = dlt::run_experiment(cfg, dlt::ExecutionMode::serial);
  const auto t1 = clock::now();
  const auto parallel = dlt::run_experiment(cfg, dlt::ExecutionMode::openmp);
  const auto t2 = clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  const bool identical = dlt::to_csv(serial) == dlt::to_csv(parallel);

  std::printf("trials=%d K=%ld\n", trials, k);
  std::printf("serial   %.3fs\n", ts);
  std::printf("parallel %.3fs  (speedup %.2fx)\n", tp, ts / tp);
  std::printf("outputs identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
