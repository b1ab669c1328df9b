#include "dlt/decoder.hpp"

#include <algorithm>

#include "dlt/error.hpp"

namespace dlt {

double erasure_rate(const DecodeReport& r, RateScope scope, int index) {
  switch (scope) {
    case RateScope::overall:
      return r.overall_erasure_rate;
    case RateScope::source:
      if (index < 1 || index > static_cast<int>(r.per_source_size.size()) ||
          r.per_source_size[index - 1] == 0)
        throw Error(Errc::unknown_scope, "no such source scope");
      return static_cast<double>(r.per_source_unrecovered[index - 1]) /
             static_cast<double>(r.per_source_size[index - 1]);
    case RateScope::importance_class:
      if (index < 1 || index > static_cast<int>(r.per_class_size.size()) ||
          r.per_class_size[index - 1] == 0)
        throw Error(Errc::unknown_scope, "no such class scope");
      return static_cast<double>(r.per_class_unrecovered[index - 1]) /
             static_cast<double>(r.per_class_size[index - 1]);
  }
  throw Error(Errc::unknown_scope, "bad scope");
}

DecodingGraph::DecodingGraph(std::vector<VarLabel> labels, bool payload_mode)
    : labels_(std::move(labels)), payload_mode_(payload_mode) {
  recovered_.assign(labels_.size(), false);
  connections_.assign(labels_.size(), 0);
  if (payload_mode_) values_.assign(labels_.size(), 0);
  var_checks_.resize(labels_.size());
  for (const auto& l : labels_) {
    num_sources_ = std::max(num_sources_, l.source_id);
    num_classes_ = std::max(num_classes_, l.importance_class);
  }
}

void DecodingGraph::add_check(const RelayCodedSymbol& sym) {
  add_check(sym.neighbors, sym.payload);
}

void DecodingGraph::add_check(const std::vector<std::uint64_t>& neighbors,
                              std::uint8_t payload) {
  const auto id = static_cast<std::uint32_t>(checks_.size());
  Check c;
  c.neighbors = neighbors;
  c.acc = payload;
  for (auto v : c.neighbors) {
    ++connections_[v];
    if (recovered_[v]) {
      if (payload_mode_) c.acc ^= values_[v]; // pre-peel known variables
    } else {
      ++c.residual;
      var_checks_[v].push_back(id);
    }
  }
  const int residual = c.residual;
  checks_.push_back(std::move(c));
  if (residual == 1) work_.push_back(id);
}

void DecodingGraph::recover(long var, std::uint8_t value) {
  recovered_[var] = true;
  if (payload_mode_) values_[var] = value;
  ++recovered_total_;
  for (auto cid : var_checks_[var]) {
    Check& c = checks_[cid];
    --c.residual;
    if (payload_mode_) c.acc ^= value;
    if (c.residual == 1) work_.push_back(cid);
  }
  var_checks_[var].clear();
  var_checks_[var].shrink_to_fit();
}

void DecodingGraph::peel(Rng* shuffle) {
  while (work_head_ < work_.size()) {
    std::uint32_t cid;
    if (shuffle) {
      const std::size_t pick =
          work_head_ + shuffle->index(work_.size() - work_head_);
      std::swap(work_[pick], work_[work_head_]);
    }
    cid = work_[work_head_++];
    Check& c = checks_[cid];
    if (c.residual != 1) continue; // resolved since it was queued
    for (auto v : c.neighbors) {
      if (!recovered_[v]) {
        recover(static_cast<long>(v), c.acc);
        ++iterations_;
        break;
      }
    }
  }
  // Compact the consumed prefix.
  work_.erase(work_.begin(), work_.begin() + static_cast<long>(work_head_));
  work_head_ = 0;
}

DecodeReport DecodingGraph::report() const {
  DecodeReport r;
  r.total_vars = num_vars();
  r.recovered = recovered_total_;
  r.iterations = iterations_;
  r.per_source_unrecovered.assign(static_cast<std::size_t>(num_sources_), 0);
  r.per_source_size.assign(static_cast<std::size_t>(num_sources_), 0);
  if (num_classes_ > 0) {
    r.per_class_unrecovered.assign(static_cast<std::size_t>(num_classes_), 0);
    r.per_class_size.assign(static_cast<std::size_t>(num_classes_), 0);
  }
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    const auto& l = labels_[v];
    ++r.per_source_size[static_cast<std::size_t>(l.source_id) - 1];
    if (!recovered_[v]) ++r.per_source_unrecovered[static_cast<std::size_t>(l.source_id) - 1];
    if (l.importance_class > 0) {
      ++r.per_class_size[static_cast<std::size_t>(l.importance_class) - 1];
      if (!recovered_[v])
        ++r.per_class_unrecovered[static_cast<std::size_t>(l.importance_class) - 1];
    }
  }
  r.overall_erasure_rate =
      static_cast<double>(r.total_vars - r.recovered) / static_cast<double>(r.total_vars);
  return r;
}

bool DecodingGraph::verify_payload(std::span<const std::uint8_t> truth) const {
  if (!payload_mode_) throw Error(Errc::payload_disabled, "graph built without payloads");
  for (std::size_t v = 0; v < labels_.size(); ++v)
    if (recovered_[v] && values_[v] != truth[v]) return false;
  return true;
}

} // namespace dlt
