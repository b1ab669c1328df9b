#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dlt/analysis.hpp"
#include "dlt/decoder.hpp"
#include "dlt/dist.hpp"
#include "dlt/relay.hpp"

namespace dlt {

enum class SchedulingPolicy { round_robin, random_one, all };

struct WindowConfig {
  std::vector<int> class_of_source; // 1..I per source
  std::vector<double> theta;
  std::vector<std::vector<double>> gamma_w; // node coefficients per window
};

struct ExperimentConfig {
  int num_sources = 0;
  int num_relays = 1;
  int depth = 1; // D
  std::vector<long> block_lengths; // K_i
  RelayScheme scheme = RelayScheme::shift_buffer;
  ErasurePolicy erasure_policy = ErasurePolicy::stall;
  SchedulingPolicy scheduling = SchedulingPolicy::round_robin;
  std::vector<double> omega;                // node coefficients; see omega_spec
  std::vector<double> gamma;                // node coefficients (all relays)
  std::vector<double> q;                    // selection over sources
  std::optional<WindowConfig> windows;
  std::vector<std::vector<double>> delta_sr; // [relay][source]
  std::vector<double> delta_rd;              // per relay
  std::vector<double> overheads;             // transmission overhead grid
  int trials = 1;
  std::uint64_t seed = 1;
  bool payload = false;

  long total_k() const {
    long k = 0;
    for (long ki : block_lengths) k += ki;
    return k;
  }
  std::vector<double> alphas() const;
  void validate() const;
};

// Flat `key = value` text with `#` comments; lists comma separated;
// the source-relay erasure matrix lives under a `[deltas]` header, one
// relay per row. See README for the grammar.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct TrialResult {
  std::vector<long> received;               // N-hat per overhead point
  std::vector<DecodeReport> reports;        // one per overhead point
  std::vector<std::vector<long>> degree0_by_class; // [point][class-1]
  std::vector<long> first_transmit_round;   // per relay
  long stalls = 0;
  bool payload_ok = true;
};

struct ResultRow {
  double overhead = 0.0;
  std::string scope; // overall | source:<i> | class:<i>
  double erasure_rate = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<TrialResult> trials;
  ExperimentConfig config;
};

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed);

enum class ExecutionMode { serial, openmp };

// Deterministic for a given master seed regardless of execution mode:
// each trial derives its streams from (seed, trial index) and the
// reduction is ordered by trial index.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                ExecutionMode mode = ExecutionMode::openmp);

// CSV `overhead,scope,erasure_rate,trials,K,scheme,seed`, 10 significant
// digits, LF line endings.
void emit_csv(const ExperimentResult& result, const std::string& path);
std::string to_csv(const ExperimentResult& result);

std::string scheme_name(RelayScheme s);

struct CrossingGap {
  double target_rate = 0.0;
  double sim_overhead = 0.0;
  double de_overhead = 0.0;
  double gap = 0.0;
};

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

// Interpolated overhead at which a monotone-decreasing curve crosses a
// target rate (linear in x, log in y). Throws no_crossing.
double crossing_overhead(const Curve& curve, double target_rate);

std::vector<CrossingGap> compare_to_de(const Curve& sim, const Curve& de,
                                       const std::vector<double>& targets);

// Density evolution for the experiment's configuration at one reception
// overhead. Scope order matches the CSV scopes: overall first, then
// source:i (and class:i with windows).
struct DEPointResult {
  std::vector<ResultRow> rows;
  int iterations = 0;
  bool converged = false;
};
DEPointResult de_point(const ExperimentConfig& cfg, double epsilon_r);

std::vector<ResultRow> de_curve(const ExperimentConfig& cfg,
                                const std::vector<double>& epsilon_r_grid);

// ML lower-bound curve per importance class (windowed configs only).
std::vector<ResultRow> bound_curve(const ExperimentConfig& cfg,
                                   const std::vector<double>& epsilon_r_grid);

} // namespace dlt
