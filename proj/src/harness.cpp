#include "dlt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dlt/channel.hpp"
#include "dlt/error.hpp"
#include "dlt/source.hpp"

namespace dlt {

std::vector<double> ExperimentConfig::alphas() const {
  const double k = static_cast<double>(total_k());
  std::vector<double> a;
  for (long ki : block_lengths) a.push_back(static_cast<double>(ki) / k);
  return a;
}

void ExperimentConfig::validate() const {
  if (num_sources < 1 || num_relays < 1)
    throw Error(Errc::config_invalid, "need at least one source and one relay");
  if (block_lengths.size() != static_cast<std::size_t>(num_sources))
    throw Error(Errc::config_invalid, "one block length per source required");
  const bool partitioned =
      scheme == RelayScheme::shift_buffer || scheme == RelayScheme::slot_buffer;
  for (long ki : block_lengths) {
    if (ki < 1) throw Error(Errc::config_invalid, "block lengths must be positive");
    if (partitioned && ki % depth != 0)
      throw Error(Errc::config_invalid, "K_i must be divisible by D for buffered schemes");
  }
  if (q.size() != static_cast<std::size_t>(num_sources))
    throw Error(Errc::config_invalid, "selection distribution must have S entries");
  if (delta_rd.size() != static_cast<std::size_t>(num_relays))
    throw Error(Errc::config_invalid, "one relay-destination erasure probability per relay");
  if (delta_sr.size() != static_cast<std::size_t>(num_relays))
    throw Error(Errc::config_invalid, "source-relay erasure matrix must have R rows");
  for (const auto& row : delta_sr)
    if (row.size() != static_cast<std::size_t>(num_sources))
      throw Error(Errc::config_invalid, "source-relay erasure matrix must have S columns");
  auto check01 = [](double d) {
    if (d < 0.0 || d > 1.0)
      throw Error(Errc::config_invalid, "erasure probabilities must lie in [0,1]");
  };
  for (double d : delta_rd) check01(d);
  for (const auto& row : delta_sr)
    for (double d : row) check01(d);
  if (overheads.empty()) throw Error(Errc::config_invalid, "overhead grid is empty");
  for (std::size_t i = 1; i < overheads.size(); ++i)
    if (overheads[i] <= overheads[i - 1])
      throw Error(Errc::config_invalid, "overhead grid must be strictly increasing");
  if (trials < 1) throw Error(Errc::config_invalid, "trials must be >= 1");
  if (windows) {
    if (windows->class_of_source.size() != static_cast<std::size_t>(num_sources))
      throw Error(Errc::config_invalid, "window class list must have S entries");
    if (windows->gamma_w.size() != windows->theta.size())
      throw Error(Errc::config_invalid, "one relay-degree distribution per window required");
  }
}

namespace {

DegreeDistribution make_dist(const std::vector<double>& coeffs, DistKind kind) {
  return DegreeDistribution(coeffs, Perspective::node, kind);
}

std::optional<WindowSpec> make_window_spec(const ExperimentConfig& cfg) {
  if (!cfg.windows) return std::nullopt;
  WindowSpec ws{cfg.windows->class_of_source,
                make_dist(cfg.windows->theta, DistKind::window_assignment),
                {}};
  for (const auto& g : cfg.windows->gamma_w) ws.gamma_w.push_back(make_dist(g, DistKind::relay));
  return ws;
}

} // namespace

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  cfg.validate();
  const int S = cfg.num_sources;
  const int R = cfg.num_relays;
  const long K = cfg.total_k();
  const bool partitioned =
      cfg.scheme == RelayScheme::shift_buffer || cfg.scheme == RelayScheme::slot_buffer;

  std::vector<long> offsets(static_cast<std::size_t>(S) + 1, 0);
  for (int i = 0; i < S; ++i) offsets[i + 1] = offsets[i] + cfg.block_lengths[i];

  std::vector<VarLabel> labels(static_cast<std::size_t>(K));
  for (int i = 0; i < S; ++i) {
    const int cls = cfg.windows ? cfg.windows->class_of_source[i] : 0;
    for (long v = offsets[i]; v < offsets[i + 1]; ++v) labels[v] = {i + 1, cls};
  }
  DecodingGraph graph(std::move(labels), cfg.payload);

  const auto omega = make_dist(cfg.omega, DistKind::check);
  std::vector<SourceEncoder> sources;
  for (int i = 0; i < S; ++i) {
    SourceConfig sc{i + 1, cfg.block_lengths[i], partitioned ? cfg.depth : 1, omega,
                    cfg.payload, true};
    sources.emplace_back(sc, Rng::derive(trial_seed, 1, static_cast<std::uint64_t>(i)));
  }

  std::vector<Relay> relays;
  const auto q = make_dist(cfg.q, DistKind::selection);
  const auto gamma = make_dist(cfg.gamma, DistKind::relay);
  const auto windows = make_window_spec(cfg);
  for (int j = 0; j < R; ++j) {
    RelayConfig rc{j + 1, cfg.depth, gamma, q, cfg.scheme, cfg.erasure_policy, windows};
    relays.emplace_back(rc, offsets, Rng::derive(trial_seed, 2, static_cast<std::uint64_t>(j)));
  }

  std::vector<std::vector<ErasureLink>> sr_links(static_cast<std::size_t>(R));
  for (int j = 0; j < R; ++j)
    for (int i = 0; i < S; ++i)
      sr_links[j].push_back(ErasureLink(
          i + 1, j + 1, cfg.delta_sr[j][i],
          Rng::derive(trial_seed, 3, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(j))));
  std::vector<ErasureLink> rd_links;
  for (int j = 0; j < R; ++j)
    rd_links.push_back(ErasureLink(j + 1, 0, cfg.delta_rd[j],
                                   Rng::derive(trial_seed, 4, static_cast<std::uint64_t>(j))));
  Rng scheduler = Rng::derive(trial_seed, 5);

  std::vector<long> targets;
  for (double e : cfg.overheads) targets.push_back(std::lround(e * static_cast<double>(K)));

  TrialResult tr;
  tr.first_transmit_round.assign(static_cast<std::size_t>(R), 0);
  const int num_classes = cfg.windows ? static_cast<int>(cfg.windows->theta.size()) : 0;

  long transmitted = 0; // N: relay-phase transmissions
  long received = 0;    // N-hat: checks surviving the relay-destination link
  std::size_t next_target = 0;
  long rr_cursor = 0;

  auto snapshot = [&]() {
    graph.peel();
    tr.reports.push_back(graph.report());
    tr.received.push_back(received);
    std::vector<long> d0(static_cast<std::size_t>(num_classes), 0);
    if (num_classes > 0) {
      const auto& conn = graph.connection_counts();
      for (int i = 0; i < S; ++i) {
        const int cls = cfg.windows->class_of_source[i];
        for (long v = offsets[i]; v < offsets[i + 1]; ++v)
          if (conn[v] == 0) ++d0[static_cast<std::size_t>(cls) - 1];
      }
    }
    tr.degree0_by_class.push_back(std::move(d0));
  };

  std::vector<char> ready_at_start(static_cast<std::size_t>(R), 0);
  for (long n = 1; next_target < targets.size(); ++n) {
    // A buffered relay waits out the full fill delay: it transmits only in
    // rounds it entered with full buffers.
    for (int j = 0; j < R; ++j)
      ready_at_start[static_cast<std::size_t>(j)] = relays[j].ready() ? 1 : 0;

    // Source transmission phase.
    for (auto& relay : relays) relay.begin_round(n);
    for (int i = 0; i < S; ++i) {
      SourceCodedSymbol sym =
          partitioned ? sources[i].encode_round(n) : sources[i].encode_conventional();
      sym.round = n;
      for (int j = 0; j < R; ++j)
        if (sr_links[j][i].transmit()) relays[j].receive(i, sym, n);
    }

    // Relay transmission phase.
    std::vector<int> scheduled;
    switch (cfg.scheduling) {
      case SchedulingPolicy::round_robin:
        scheduled.push_back(static_cast<int>(rr_cursor++ % R));
        break;
      case SchedulingPolicy::random_one:
        scheduled.push_back(static_cast<int>(scheduler.index(static_cast<std::size_t>(R))));
        break;
      case SchedulingPolicy::all:
        for (int j = 0; j < R; ++j) scheduled.push_back(j);
        break;
    }
    for (int j : scheduled) {
      std::optional<RelayCodedSymbol> sym;
      if (cfg.scheme == RelayScheme::conventional) {
        sym = relays[j].combine_conventional(n);
        if (!sym) {
          ++tr.stalls;
          continue;
        }
      } else {
        if (!ready_at_start[static_cast<std::size_t>(j)]) continue; // still filling
        sym = relays[j].combine(n);
      }
      if (tr.first_transmit_round[j] == 0) tr.first_transmit_round[j] = n;
      ++transmitted;
      if (rd_links[j].transmit()) {
        graph.add_check(*sym);
        ++received;
      }
      while (next_target < targets.size() && transmitted >= targets[next_target]) {
        snapshot();
        ++next_target;
      }
    }
  }

  if (cfg.payload) {
    std::vector<std::uint8_t> truth(static_cast<std::size_t>(K));
    for (int i = 0; i < S; ++i)
      std::copy(sources[i].bits().begin(), sources[i].bits().end(),
                truth.begin() + offsets[i]);
    tr.payload_ok = graph.verify_payload(truth);
  }
  return tr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, ExecutionMode mode) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  result.trials.resize(static_cast<std::size_t>(cfg.trials));

  const auto body = [&](int t) {
    result.trials[static_cast<std::size_t>(t)] =
        run_trial(cfg, splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(t))));
  };
  if (mode == ExecutionMode::openmp) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) body(t);
  } else {
    for (int t = 0; t < cfg.trials; ++t) body(t);
  }

  const int S = cfg.num_sources;
  const int num_classes = cfg.windows ? static_cast<int>(cfg.windows->theta.size()) : 0;
  const std::size_t P = cfg.overheads.size();

  auto mean_rate = [&](RateScope scope, int index, std::size_t point) {
    double sum = 0.0;
    for (const auto& tr : result.trials) sum += erasure_rate(tr.reports[point], scope, index);
    return sum / static_cast<double>(cfg.trials);
  };

  for (std::size_t p = 0; p < P; ++p)
    result.rows.push_back({cfg.overheads[p], "overall", mean_rate(RateScope::overall, 0, p)});
  for (int i = 1; i <= S; ++i)
    for (std::size_t p = 0; p < P; ++p)
      result.rows.push_back({cfg.overheads[p], "source:" + std::to_string(i),
                             mean_rate(RateScope::source, i, p)});
  for (int c = 1; c <= num_classes; ++c)
    for (std::size_t p = 0; p < P; ++p)
      result.rows.push_back({cfg.overheads[p], "class:" + std::to_string(c),
                             mean_rate(RateScope::importance_class, c, p)});
  return result;
}

std::string scheme_name(RelayScheme s) {
  switch (s) {
    case RelayScheme::conventional: return "conventional";
    case RelayScheme::shift_buffer: return "shift_buffer";
    case RelayScheme::slot_buffer: return "slot_buffer";
    case RelayScheme::one_bit: return "one_bit";
  }
  return "?";
}

std::string to_csv(const ExperimentResult& result) {
  std::string out = "overhead,scope,erasure_rate,trials,K,scheme,seed\n";
  char buf[128];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g,%d,%ld,%s,%llu\n", row.overhead,
                  row.scope.c_str(), row.erasure_rate, result.config.trials,
                  result.config.total_k(), scheme_name(result.config.scheme).c_str(),
                  static_cast<unsigned long long>(result.config.seed));
    out += buf;
  }
  return out;
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot write " + path);
  f << to_csv(result);
}

double crossing_overhead(const Curve& curve, double target_rate) {
  const auto& x = curve.x;
  const auto& y = curve.y;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= target_rate) {
      if (i == 0) return x[0];
      const double ly0 = std::log(std::max(y[i - 1], 1e-300));
      const double ly1 = std::log(std::max(y[i], 1e-300));
      const double lt = std::log(target_rate);
      const double f = (ly0 - lt) / (ly0 - ly1);
      return x[i - 1] + f * (x[i] - x[i - 1]);
    }
  }
  throw Error(Errc::no_crossing, "curve never reaches the target rate");
}

std::vector<CrossingGap> compare_to_de(const Curve& sim, const Curve& de,
                                       const std::vector<double>& targets) {
  std::vector<CrossingGap> gaps;
  for (double t : targets) {
    CrossingGap g;
    g.target_rate = t;
    g.sim_overhead = crossing_overhead(sim, t);
    g.de_overhead = crossing_overhead(de, t);
    g.gap = std::abs(g.sim_overhead - g.de_overhead);
    gaps.push_back(g);
  }
  return gaps;
}

namespace {

DewltParams dewlt_params(const ExperimentConfig& cfg) {
  const auto alpha = cfg.alphas();
  const int I = static_cast<int>(cfg.windows->theta.size());
  DewltParams p{make_dist(cfg.omega, DistKind::check), cfg.windows->theta,
                std::vector<double>(static_cast<std::size_t>(I), 0.0),
                std::vector<double>(static_cast<std::size_t>(I), 0.0),
                {},
                0.0};
  for (int i = 0; i < cfg.num_sources; ++i) {
    const int cls = cfg.windows->class_of_source[i];
    p.pi[static_cast<std::size_t>(cls) - 1] += alpha[static_cast<std::size_t>(i)];
    p.q_class[static_cast<std::size_t>(cls) - 1] += cfg.q[static_cast<std::size_t>(i)];
  }
  for (const auto& g : cfg.windows->gamma_w) p.gamma_w.push_back(make_dist(g, DistKind::relay));
  return p;
}

} // namespace

DEPointResult de_point(const ExperimentConfig& cfg, double epsilon_r) {
  DEPointResult out;
  const auto alpha = cfg.alphas();
  if (cfg.windows) {
    DewltParams p = dewlt_params(cfg);
    p.epsilon_r = epsilon_r;
    const auto de = de_dewlt(p);
    double overall = 0.0;
    for (std::size_t c = 0; c < p.pi.size(); ++c) overall += p.pi[c] * de.fixed_point[c];
    out.rows.push_back({epsilon_r, "overall", overall});
    for (int i = 0; i < cfg.num_sources; ++i)
      out.rows.push_back({epsilon_r, "source:" + std::to_string(i + 1),
                          de.fixed_point[static_cast<std::size_t>(
                              cfg.windows->class_of_source[i]) - 1]});
    for (std::size_t c = 0; c < p.pi.size(); ++c)
      out.rows.push_back({epsilon_r, "class:" + std::to_string(c + 1), de.fixed_point[c]});
    out.iterations = de.iterations;
    out.converged = de.converged;
  } else {
    const auto omega = make_dist(cfg.omega, DistKind::check);
    const auto gamma = make_dist(cfg.gamma, DistKind::relay);
    // All relays share Γ, so the multi-relay recursion collapses to the
    // single-relay one at the summed overhead.
    const auto de = de_uep_weighted(omega, gamma, cfg.q, alpha, epsilon_r);
    double overall = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) overall += alpha[i] * de.fixed_point[i];
    out.rows.push_back({epsilon_r, "overall", overall});
    for (std::size_t i = 0; i < alpha.size(); ++i)
      out.rows.push_back({epsilon_r, "source:" + std::to_string(i + 1), de.fixed_point[i]});
    out.iterations = de.iterations;
    out.converged = de.converged;
  }
  return out;
}

std::vector<ResultRow> de_curve(const ExperimentConfig& cfg,
                                const std::vector<double>& epsilon_r_grid) {
  std::vector<ResultRow> rows;
  for (double er : epsilon_r_grid) {
    auto point = de_point(cfg, er);
    rows.insert(rows.end(), point.rows.begin(), point.rows.end());
  }
  return rows;
}

std::vector<ResultRow> bound_curve(const ExperimentConfig& cfg,
                                   const std::vector<double>& epsilon_r_grid) {
  if (!cfg.windows)
    throw Error(Errc::windows_not_configured, "bound curves need an expanding-window config");
  const DewltParams p = dewlt_params(cfg);
  const double omega_p1 = p.omega.mean_degree();
  const double K = static_cast<double>(cfg.total_k());
  const int I = static_cast<int>(p.theta.size());
  std::vector<double> rho, kappa_w;
  double cum = 0.0;
  for (int j = 0; j < I; ++j) {
    rho.push_back(p.gamma_w[static_cast<std::size_t>(j)].mean_degree() * omega_p1);
    cum += p.pi[static_cast<std::size_t>(j)];
    kappa_w.push_back(cum * K);
  }
  std::vector<ResultRow> rows;
  for (double er : epsilon_r_grid)
    for (int i = 1; i <= I; ++i)
      rows.push_back({er, "class:" + std::to_string(i),
                      ml_lower_bound(p.theta, rho, kappa_w, K, er, i)});
  return rows;
}

namespace {

std::vector<double> parse_list(const std::string& value) {
  std::vector<double> out;
  // start:step:stop range shorthand
  if (std::count(value.begin(), value.end(), ':') == 2 &&
      value.find(',') == std::string::npos) {
    double a, b, c;
    char c1, c2;
    std::istringstream ss(value);
    if (ss >> a >> c1 >> b >> c2 >> c && c1 == ':' && c2 == ':') {
      for (double v = a; v <= c + 1e-12; v += b) out.push_back(v);
      return out;
    }
  }
  std::istringstream ss(value);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_dist_value(const std::string& value, DistKind kind) {
  if (value.rfind("rsd:", 0) == 0) {
    const auto params = parse_list(value.substr(4));
    if (params.size() != 3) throw Error(Errc::config_invalid, "rsd needs K,c,delta");
    return DegreeDistribution::robust_soliton(static_cast<int>(params[0]), params[1],
                                              params[2])
        .coefficients();
  }
  if (value.rfind("file:", 0) == 0)
    return DegreeDistribution::load_file(value.substr(5), Perspective::node, kind)
        .coefficients();
  return parse_list(value);
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  bool in_deltas = false;
  std::vector<std::vector<double>> delta_rows;
  double delta_sr_scalar = 0.0;
  bool have_scalar_sr = false;
  std::vector<std::vector<double>> gamma_w;
  std::vector<double> theta;
  std::vector<int> window_class;

  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[deltas]") {
      in_deltas = true;
      continue;
    }
    if (in_deltas && line.find('=') == std::string::npos) {
      std::vector<double> row;
      std::istringstream rs(line);
      double v;
      while (rs >> v) row.push_back(v);
      delta_rows.push_back(std::move(row));
      continue;
    }
    in_deltas = false;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::config_invalid, "expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "S") cfg.num_sources = std::stoi(value);
    else if (key == "R") cfg.num_relays = std::stoi(value);
    else if (key == "D") cfg.depth = std::stoi(value);
    else if (key == "K") {
      cfg.block_lengths.clear();
      for (double v : parse_list(value)) cfg.block_lengths.push_back(std::lround(v));
    } else if (key == "scheme") {
      if (value == "conventional") cfg.scheme = RelayScheme::conventional;
      else if (value == "shift_buffer") cfg.scheme = RelayScheme::shift_buffer;
      else if (value == "slot_buffer") cfg.scheme = RelayScheme::slot_buffer;
      else if (value == "one_bit") cfg.scheme = RelayScheme::one_bit;
      else throw Error(Errc::config_invalid, "unknown scheme " + value);
    } else if (key == "scheduling") {
      if (value == "round_robin") cfg.scheduling = SchedulingPolicy::round_robin;
      else if (value == "random_one") cfg.scheduling = SchedulingPolicy::random_one;
      else if (value == "all") cfg.scheduling = SchedulingPolicy::all;
      else throw Error(Errc::config_invalid, "unknown scheduling policy " + value);
    } else if (key == "erasure_policy") {
      if (value == "stall") cfg.erasure_policy = ErasurePolicy::stall;
      else if (value == "reselect") cfg.erasure_policy = ErasurePolicy::reselect;
      else throw Error(Errc::config_invalid, "unknown erasure policy " + value);
    } else if (key == "omega") cfg.omega = parse_dist_value(value, DistKind::check);
    else if (key == "gamma") cfg.gamma = parse_dist_value(value, DistKind::relay);
    else if (key == "q") cfg.q = parse_list(value);
    else if (key == "theta") theta = parse_list(value);
    else if (key == "window_class") {
      for (double v : parse_list(value)) window_class.push_back(static_cast<int>(v));
    } else if (key.rfind("gamma_w", 0) == 0) {
      const std::size_t idx = static_cast<std::size_t>(std::stoi(key.substr(7)));
      if (gamma_w.size() < idx) gamma_w.resize(idx);
      gamma_w[idx - 1] = parse_dist_value(value, DistKind::relay);
    } else if (key == "delta_rd") cfg.delta_rd = parse_list(value);
    else if (key == "delta_sr") {
      delta_sr_scalar = std::stod(value);
      have_scalar_sr = true;
    } else if (key == "overheads") cfg.overheads = parse_list(value);
    else if (key == "trials") cfg.trials = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "payload") cfg.payload = (value == "true" || value == "1");
    else throw Error(Errc::config_invalid, "unknown key " + key);
  }

  if (cfg.block_lengths.size() == 1 && cfg.num_sources > 1) {
    // A single K is the network total, split equally.
    const long total = cfg.block_lengths[0];
    if (total % cfg.num_sources != 0)
      throw Error(Errc::config_invalid, "total K not divisible by S");
    cfg.block_lengths.assign(static_cast<std::size_t>(cfg.num_sources),
                             total / cfg.num_sources);
  }
  if (cfg.q.empty() && cfg.num_sources > 0)
    cfg.q.assign(static_cast<std::size_t>(cfg.num_sources), 1.0 / cfg.num_sources);
  if (cfg.delta_rd.size() == 1 && cfg.num_relays > 1)
    cfg.delta_rd.assign(static_cast<std::size_t>(cfg.num_relays), cfg.delta_rd[0]);
  if (!delta_rows.empty()) cfg.delta_sr = std::move(delta_rows);
  else
    cfg.delta_sr.assign(static_cast<std::size_t>(cfg.num_relays),
                        std::vector<double>(static_cast<std::size_t>(cfg.num_sources),
                                            have_scalar_sr ? delta_sr_scalar : 0.0));
  if (!theta.empty())
    cfg.windows = WindowConfig{std::move(window_class), std::move(theta), std::move(gamma_w)};
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

} // namespace dlt
