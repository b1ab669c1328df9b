#pragma once

#include <cstdint>
#include <vector>

#include "dlt/dist.hpp"
#include "dlt/rng.hpp"

namespace dlt {

int class_of_round(long round, int depth);

struct SourceConfig {
  int source_id = 1;
  long block_length = 0; // K_i information bits
  int depth = 1;         // D classes; K_i must be divisible by D
  DegreeDistribution omega;
  bool track_payload = false;
  bool clamp_degree = true; // clamp sampled degree to the class size
};

/// One source-encoded packet. Neighbor ids are local to the source,
/// sorted ascending. class_index is 0 for unpartitioned (conventional)
/// encoding, otherwise the class the neighbors were drawn from.
struct SourceCodedSymbol {
  int source_id = 0;
  long round = 0;
  int class_index = 0;
  std::vector<std::uint32_t> neighbors;
  std::uint8_t payload = 0;
  bool has_payload = false;
};

/// LT encoder for one source. Owns its rng stream and (in payload mode)
/// its information bits, so encoders for distinct sources are independent.
class SourceEncoder {
public:
  SourceEncoder(SourceConfig cfg, Rng rng);

  // Class-partitioned encoding: degree from omega, neighbors uniform
  // without replacement from class mod(n-1,D)+1.
  SourceCodedSymbol encode_round(long round);

  // Unrestricted encoding over all K_i bits; class_index 0.
  SourceCodedSymbol encode_conventional();

  long class_size() const { return cfg_.block_length / cfg_.depth; }
  const SourceConfig& config() const { return cfg_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

private:
  SourceCodedSymbol make_symbol(long round, int class_index, long range_lo, long range_size);

  SourceConfig cfg_;
  Rng rng_;
  std::vector<std::uint8_t> bits_;
};

} // namespace dlt
