#pragma once

#include "dlt/error.hpp"
#include "dlt/rng.hpp"

namespace dlt {

/// Memoryless erasure link. Each transmit() consumes exactly one rng
/// variate, so erasure patterns are reproducible per link given the
/// master seed and the link endpoints.
class ErasureLink {
public:
  ErasureLink(int from, int to, double delta, Rng rng)
      : from_(from), to_(to), delta_(delta), rng_(rng) {
    if (delta < 0.0 || delta > 1.0)
      throw Error(Errc::invalid_parameter, "erasure probability outside [0,1]");
  }

  static ErasureLink derived(std::uint64_t master_seed, int from, int to, double delta) {
    return ErasureLink(from, to, delta,
                       Rng::derive(master_seed, 0x11abcdefULL,
                                   static_cast<std::uint64_t>(from),
                                   static_cast<std::uint64_t>(to)));
  }

  // True when the symbol survives.
  bool transmit() { return rng_.uniform() >= delta_; }

  double delta() const { return delta_; }
  int from() const { return from_; }
  int to() const { return to_; }

private:
  int from_;
  int to_;
  double delta_;
  Rng rng_;
};

} // namespace dlt
