#include "dlt/relay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dlt/error.hpp"

namespace dlt {

LinkBuffer::LinkBuffer(int source_id, int depth, BufferMode mode)
    : source_id_(source_id), depth_(mode == BufferMode::one_bit ? 1 : depth),
      mode_(mode) {
  if (depth_ < 1) throw Error(Errc::invalid_parameter, "buffer depth must be >= 1");
  slots_.resize(static_cast<std::size_t>(depth_));
}

std::optional<SourceCodedSymbol> LinkBuffer::push_shift(SourceCodedSymbol sym) {
  if (mode_ != BufferMode::shift)
    throw Error(Errc::mode_mismatch, "push_shift on non-shift buffer");
  std::optional<SourceCodedSymbol> evicted = std::move(slots_.back());
  for (std::size_t m = slots_.size(); m-- > 1;) slots_[m] = std::move(slots_[m - 1]);
  slots_[0] = std::move(sym);
  if (!evicted) ++fill_count_;
  return evicted;
}

std::optional<SourceCodedSymbol> LinkBuffer::store_slot(SourceCodedSymbol sym, long round) {
  if (mode_ != BufferMode::slot)
    throw Error(Errc::mode_mismatch, "store_slot on non-slot buffer");
  const int p = class_of_round(round, depth_);
  std::optional<SourceCodedSymbol> old = std::move(slots_[p - 1]);
  slots_[p - 1] = std::move(sym);
  if (!old) ++fill_count_;
  return old;
}

void LinkBuffer::store_one_bit(SourceCodedSymbol sym) {
  if (mode_ != BufferMode::one_bit)
    throw Error(Errc::mode_mismatch, "store_one_bit on non-one-bit buffer");
  if (!slots_[0]) ++fill_count_;
  slots_[0] = std::move(sym);
}

std::vector<int> sample_source_counts(const DegreeDistribution& q, int total_degree,
                                      Rng& rng, const std::vector<int>& caps) {
  const int S = q.max_degree();
  std::vector<int> counts(static_cast<std::size_t>(S), 0);
  for (int draw = 0; draw < total_degree; ++draw) {
    int i = q.sample(rng) - 1;
    if (counts[i] >= caps[i]) {
      // Redistribute over sources with remaining capacity.
      double avail = 0.0;
      for (int s = 0; s < S; ++s)
        if (counts[s] < caps[s]) avail += q.coeff(s + 1);
      if (avail <= 0.0) break; // total capacity exhausted
      double u = rng.uniform() * avail;
      i = -1;
      for (int s = 0; s < S; ++s) {
        if (counts[s] >= caps[s]) continue;
        u -= q.coeff(s + 1);
        i = s;
        if (u <= 0.0) break;
      }
    }
    ++counts[i];
  }
  return counts;
}

Relay::Relay(RelayConfig cfg, std::vector<long> id_offsets, Rng rng)
    : cfg_(std::move(cfg)), offsets_(std::move(id_offsets)), rng_(rng) {
  const int S = static_cast<int>(offsets_.size()) - 1;
  if (S < 1) throw Error(Errc::invalid_parameter, "relay needs at least one source");
  if (cfg_.q.max_degree() != S)
    throw Error(Errc::invalid_parameter, "selection distribution must have S entries");
  const bool buffered =
      cfg_.scheme == RelayScheme::shift_buffer || cfg_.scheme == RelayScheme::slot_buffer;
  const int cap = buffered ? cfg_.depth * S : S;
  auto check_dmax = [&](const DegreeDistribution& g) {
    if (g.max_degree() > cap)
      throw Error(Errc::invalid_parameter, "relay degree exceeds buffer capacity");
  };
  check_dmax(cfg_.gamma);
  if (cfg_.windows) {
    if (cfg_.windows->class_of_source.size() != static_cast<std::size_t>(S))
      throw Error(Errc::invalid_parameter, "window class list must have S entries");
    for (const auto& g : cfg_.windows->gamma_w) check_dmax(g);
  }
  BufferMode mode = BufferMode::shift;
  if (cfg_.scheme == RelayScheme::slot_buffer) mode = BufferMode::slot;
  if (cfg_.scheme == RelayScheme::one_bit) mode = BufferMode::one_bit;
  for (int i = 0; i < S; ++i) buffers_.emplace_back(i + 1, cfg_.depth, mode);
  arrivals_.resize(static_cast<std::size_t>(S));
}

void Relay::begin_round(long) {
  if (cfg_.scheme == RelayScheme::conventional)
    std::fill(arrivals_.begin(), arrivals_.end(), std::nullopt);
}

void Relay::receive(int source_index, SourceCodedSymbol sym, long round) {
  switch (cfg_.scheme) {
    case RelayScheme::shift_buffer:
      buffers_[source_index].push_shift(std::move(sym));
      break;
    case RelayScheme::slot_buffer:
      buffers_[source_index].store_slot(std::move(sym), round);
      break;
    case RelayScheme::one_bit:
      buffers_[source_index].store_one_bit(std::move(sym));
      break;
    case RelayScheme::conventional:
      arrivals_[source_index] = std::move(sym);
      break;
  }
}

bool Relay::ready() const {
  if (cfg_.scheme == RelayScheme::conventional) {
    for (const auto& a : arrivals_)
      if (a) return true;
    return false;
  }
  for (const auto& b : buffers_)
    if (!b.full()) return false;
  return true;
}

std::vector<int> Relay::select_counts(int total_degree, const std::vector<int>& caps,
                                      int max_class) {
  if (max_class == 0) return sample_source_counts(cfg_.q, total_degree, rng_, caps);
  // Restrict q to sources inside the window and renormalize.
  const int S = num_sources();
  std::vector<double> qw(static_cast<std::size_t>(S), 0.0);
  double sum = 0.0;
  for (int s = 0; s < S; ++s) {
    if (cfg_.windows->class_of_source[s] <= max_class) {
      qw[s] = cfg_.q.coeff(s + 1);
      sum += qw[s];
    }
  }
  for (double& w : qw) w /= sum;
  DegreeDistribution restricted(std::move(qw), Perspective::node, DistKind::selection);
  return sample_source_counts(restricted, total_degree, rng_, caps);
}

RelayCodedSymbol Relay::assemble(long round, int window,
                                 const std::vector<const SourceCodedSymbol*>& parts) {
  RelayCodedSymbol out;
  out.relay_id = cfg_.relay_id;
  out.round = round;
  out.window = window;
  bool payload_ok = !parts.empty();
  for (const auto* p : parts) {
    const long off = offsets_[p->source_id - 1];
    for (auto id : p->neighbors)
      out.neighbors.push_back(static_cast<std::uint64_t>(off + id));
    out.provenance.emplace_back(p->source_id, p->round);
    out.component_degree_sum += static_cast<int>(p->neighbors.size());
    payload_ok = payload_ok && p->has_payload;
    out.payload ^= p->payload;
  }
  out.has_payload = payload_ok;
  if (!payload_ok) out.payload = 0;
  // Symmetric difference: keep ids appearing an odd number of times.
  std::sort(out.neighbors.begin(), out.neighbors.end());
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.neighbors.size();) {
    std::size_t j = i;
    while (j < out.neighbors.size() && out.neighbors[j] == out.neighbors[i]) ++j;
    if ((j - i) % 2 == 1) out.neighbors[w++] = out.neighbors[i];
    i = j;
  }
  out.neighbors.resize(w);
  return out;
}

RelayCodedSymbol Relay::combine(long round) {
  if (cfg_.scheme == RelayScheme::conventional)
    throw Error(Errc::mode_mismatch, "use combine_conventional for the bufferless scheme");
  if (!ready()) throw Error(Errc::buffers_not_full, "relay buffers not yet filled");

  int window = 0;
  const DegreeDistribution* gamma = &cfg_.gamma;
  if (cfg_.windows) {
    window = cfg_.windows->theta.sample(rng_);
    gamma = &cfg_.windows->gamma_w[static_cast<std::size_t>(window) - 1];
  }
  const int d = gamma->sample(rng_);
  const int S = num_sources();

  std::vector<const SourceCodedSymbol*> parts;
  if (cfg_.scheme == RelayScheme::one_bit) {
    // d distinct sources per q, without replacement.
    std::vector<int> caps(static_cast<std::size_t>(S), 1);
    const auto counts = select_counts(std::min(d, S), caps, window);
    for (int s = 0; s < S; ++s)
      if (counts[s] > 0) parts.push_back(&*buffers_[s].slot(1));
  } else {
    std::vector<int> caps(static_cast<std::size_t>(S), cfg_.depth);
    const auto counts = select_counts(d, caps, window);
    for (int s = 0; s < S; ++s) {
      for (int m = 1; m <= counts[s]; ++m) {
        if (cfg_.scheme == RelayScheme::shift_buffer) {
          parts.push_back(&*buffers_[s].slot(m));
        } else {
          // Walk backwards from the current round's slot.
          const int vl = class_of_round(round, cfg_.depth);
          const int um = (vl - m + cfg_.depth) % cfg_.depth + 1;
          parts.push_back(&*buffers_[s].slot(um));
        }
      }
    }
  }
  return assemble(round, window, parts);
}

std::optional<RelayCodedSymbol> Relay::combine_conventional(long round) {
  if (cfg_.scheme != RelayScheme::conventional)
    throw Error(Errc::mode_mismatch, "combine_conventional on a buffered relay");
  const int S = num_sources();
  const int d = std::min(cfg_.gamma.sample(rng_), S);

  // d distinct sources, uniform.
  std::vector<int> pool(static_cast<std::size_t>(S));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> chosen;
  for (int k = 0; k < d; ++k) {
    const std::size_t t = rng_.index(pool.size());
    chosen.push_back(pool[t]);
    pool.erase(pool.begin() + static_cast<long>(t));
  }

  bool all_received = true;
  for (int s : chosen)
    if (!arrivals_[s]) all_received = false;

  if (!all_received) {
    if (cfg_.policy == ErasurePolicy::stall) return std::nullopt;
    // Reselect among the bits actually received this round.
    std::vector<int> received;
    for (int s = 0; s < S; ++s)
      if (arrivals_[s]) received.push_back(s);
    if (received.empty()) return std::nullopt;
    chosen.clear();
    const int dd = std::min<int>(d, static_cast<int>(received.size()));
    for (int k = 0; k < dd; ++k) {
      const std::size_t t = rng_.index(received.size());
      chosen.push_back(received[t]);
      received.erase(received.begin() + static_cast<long>(t));
    }
  }

  std::vector<const SourceCodedSymbol*> parts;
  for (int s : chosen) parts.push_back(&*arrivals_[s]);
  return assemble(round, 0, parts);
}

} // namespace dlt
