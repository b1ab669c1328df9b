#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dlt/relay.hpp"

namespace dlt {

struct VarLabel {
  int source_id = 1;
  int importance_class = 0; // 0 when classes are not in use
};

struct DecodeReport {
  long total_vars = 0;
  long recovered = 0;
  long iterations = 0;
  double overall_erasure_rate = 1.0;
  std::vector<long> per_source_unrecovered; // indexed by source (0-based)
  std::vector<long> per_source_size;
  std::vector<long> per_class_unrecovered; // indexed by class-1; empty if unused
  std::vector<long> per_class_size;
};

enum class RateScope { overall, source, importance_class };

double erasure_rate(const DecodeReport& report, RateScope scope, int index = 0);

/// Bipartite decoding graph with incremental peeling: checks can be
/// added as the overhead grows and peel() resumes from the current
/// state, so a single trial yields the whole erasure-rate curve.
class DecodingGraph {
public:
  DecodingGraph(std::vector<VarLabel> labels, bool payload_mode);

  void add_check(const RelayCodedSymbol& sym);
  void add_check(const std::vector<std::uint64_t>& neighbors, std::uint8_t payload = 0);

  // Peels degree-1 checks to exhaustion (FIFO). With an rng, the next
  // degree-1 check is chosen at random instead; the recovered set is
  // the same either way.
  void peel(Rng* shuffle = nullptr);

  DecodeReport report() const;
  const std::vector<bool>& recovered() const { return recovered_; }
  long recovered_count() const { return recovered_total_; }
  long num_vars() const { return static_cast<long>(labels_.size()); }
  long num_checks() const { return static_cast<long>(checks_.size()); }
  // Total incident edges ever attached to a variable (for degree-0
  // accounting against the ML lower bound).
  const std::vector<std::uint32_t>& connection_counts() const { return connections_; }

  bool verify_payload(std::span<const std::uint8_t> truth) const;

private:
  struct Check {
    std::vector<std::uint64_t> neighbors;
    int residual = 0;
    std::uint8_t acc = 0;
  };

  void recover(long var, std::uint8_t value);

  std::vector<VarLabel> labels_;
  bool payload_mode_;
  std::vector<bool> recovered_;
  std::vector<std::uint8_t> values_;
  std::vector<std::uint32_t> connections_;
  std::vector<Check> checks_;
  std::vector<std::vector<std::uint32_t>> var_checks_;
  std::vector<std::uint32_t> work_; // degree-1 check queue
  std::size_t work_head_ = 0;
  long recovered_total_ = 0;
  long iterations_ = 0;
  int num_sources_ = 0;
  int num_classes_ = 0;
};

} // namespace dlt
