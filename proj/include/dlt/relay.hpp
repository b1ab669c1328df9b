#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dlt/dist.hpp"
#include "dlt/rng.hpp"
#include "dlt/source.hpp"

namespace dlt {

enum class RelayScheme { conventional, shift_buffer, slot_buffer, one_bit };

enum class BufferMode { shift, slot, one_bit };

// What a conventional relay does when a selected source bit was erased.
enum class ErasurePolicy { stall, reselect };

/// Per-source-link buffer at a relay.
/// shift: slot m holds the symbol received m-1 rounds ago (FIFO).
/// slot: the symbol at position p has class_of_round(round, D) == p.
/// one_bit: depth 1, overwritten on every arrival.
class LinkBuffer {
public:
  LinkBuffer(int source_id, int depth, BufferMode mode);

  std::optional<SourceCodedSymbol> push_shift(SourceCodedSymbol sym);
  // No-op slots are handled by the caller: an erased round simply never
  // calls store_slot, leaving the buffer untouched.
  std::optional<SourceCodedSymbol> store_slot(SourceCodedSymbol sym, long round);
  void store_one_bit(SourceCodedSymbol sym);

  bool full() const { return fill_count_ == depth_; }
  int fill_count() const { return fill_count_; }
  int depth() const { return depth_; }
  BufferMode mode() const { return mode_; }
  // 1-based slot access.
  const std::optional<SourceCodedSymbol>& slot(int m) const {
    return slots_[static_cast<std::size_t>(m) - 1];
  }

private:
  int source_id_;
  int depth_;
  BufferMode mode_;
  int fill_count_ = 0;
  std::vector<std::optional<SourceCodedSymbol>> slots_;
};

/// Expanding-window configuration: each source belongs to an importance
/// class; window i covers classes 1..i and has its own relay-degree
/// distribution.
struct WindowSpec {
  std::vector<int> class_of_source;          // 1..I per source
  DegreeDistribution theta;                  // window assignment
  std::vector<DegreeDistribution> gamma_w;   // node perspective, one per window
};

struct RelayConfig {
  int relay_id = 1;
  int depth = 1; // D
  DegreeDistribution gamma;
  DegreeDistribution q; // selection over sources
  RelayScheme scheme = RelayScheme::shift_buffer;
  ErasurePolicy policy = ErasurePolicy::stall;
  std::optional<WindowSpec> windows;
};

/// One relay-encoded packet. Neighbors are global information-bit ids
/// (symmetric difference over the combined symbols), sorted ascending.
struct RelayCodedSymbol {
  int relay_id = 0;
  long round = 0;
  int window = 0; // 0 when windows are not in use
  std::vector<std::uint64_t> neighbors;
  std::vector<std::pair<int, long>> provenance; // (source_id, source round)
  int component_degree_sum = 0;
  std::uint8_t payload = 0;
  bool has_payload = false;
};

// d independent draws from q, capped per source at caps[i]; excess draws
// are redistributed by resampling q over sources with remaining capacity.
std::vector<int> sample_source_counts(const DegreeDistribution& q, int total_degree,
                                      Rng& rng, const std::vector<int>& caps);

class Relay {
public:
  // id_offsets[i] is the first global variable id of source i; the last
  // entry is the total K (so offsets has num_sources+1 entries).
  Relay(RelayConfig cfg, std::vector<long> id_offsets, Rng rng);

  void begin_round(long round);
  void receive(int source_index, SourceCodedSymbol sym, long round);

  bool ready() const;

  // Buffered schemes (shift, slot, one_bit, with or without windows).
  RelayCodedSymbol combine(long round);
  // Conventional bufferless scheme; nullopt is a stall.
  std::optional<RelayCodedSymbol> combine_conventional(long round);

  const LinkBuffer& buffer(int source_index) const { return buffers_[source_index]; }
  const RelayConfig& config() const { return cfg_; }
  int num_sources() const { return static_cast<int>(buffers_.size()); }

private:
  RelayCodedSymbol assemble(long round, int window,
                            const std::vector<const SourceCodedSymbol*>& parts);
  std::vector<int> select_counts(int total_degree, const std::vector<int>& caps,
                                 int max_class);

  RelayConfig cfg_;
  std::vector<long> offsets_;
  Rng rng_;
  std::vector<LinkBuffer> buffers_;
  std::vector<std::optional<SourceCodedSymbol>> arrivals_; // conventional scheme
};

} // namespace dlt
