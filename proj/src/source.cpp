#include "dlt/source.hpp"

#include <algorithm>

#include "dlt/error.hpp"

namespace dlt {

int class_of_round(long round, int depth) {
  return static_cast<int>((round - 1) % depth) + 1;
}

SourceEncoder::SourceEncoder(SourceConfig cfg, Rng rng)
    : cfg_(std::move(cfg)), rng_(rng) {
  if (cfg_.depth < 1 || cfg_.block_length < 1)
    throw Error(Errc::invalid_parameter, "block length and depth must be positive");
  if (cfg_.block_length % cfg_.depth != 0)
    throw Error(Errc::invalid_parameter, "K_i must be divisible by D");
  if (cfg_.track_payload) {
    bits_.resize(static_cast<std::size_t>(cfg_.block_length));
    for (auto& b : bits_) b = static_cast<std::uint8_t>(rng_.next_u64() & 1u);
  }
}

SourceCodedSymbol SourceEncoder::make_symbol(long round, int class_index, long range_lo,
                                             long range_size) {
  int degree = cfg_.omega.sample(rng_);
  if (degree > range_size) {
    if (!cfg_.clamp_degree)
      throw Error(Errc::degree_exceeds_class, "sampled degree exceeds class size");
    degree = static_cast<int>(range_size);
  }
  SourceCodedSymbol sym;
  sym.source_id = cfg_.source_id;
  sym.round = round;
  sym.class_index = class_index;
  // Floyd's algorithm: degree distinct ids uniform in [range_lo, range_lo+range_size).
  sym.neighbors.reserve(static_cast<std::size_t>(degree));
  for (long j = range_size - degree; j < range_size; ++j) {
    const long t = static_cast<long>(rng_.index(static_cast<std::size_t>(j + 1)));
    const std::uint32_t candidate = static_cast<std::uint32_t>(range_lo + t);
    if (std::find(sym.neighbors.begin(), sym.neighbors.end(), candidate) !=
        sym.neighbors.end())
      sym.neighbors.push_back(static_cast<std::uint32_t>(range_lo + j));
    else
      sym.neighbors.push_back(candidate);
  }
  std::sort(sym.neighbors.begin(), sym.neighbors.end());
  if (cfg_.track_payload) {
    sym.has_payload = true;
    for (auto id : sym.neighbors) sym.payload ^= bits_[id];
  }
  return sym;
}

SourceCodedSymbol SourceEncoder::encode_round(long round) {
  const int cls = class_of_round(round, cfg_.depth);
  const long xi = class_size();
  return make_symbol(round, cls, static_cast<long>(cls - 1) * xi, xi);
}

SourceCodedSymbol SourceEncoder::encode_conventional() {
  return make_symbol(0, 0, 0, cfg_.block_length);
}

} // namespace dlt
