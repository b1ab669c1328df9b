#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dlt/error.hpp"
#include "dlt/rng.hpp"

namespace dlt {

enum class Perspective { node, edge };

enum class DistKind { check, relay, selection, window_assignment, importance };

/// Probability distribution over degrees (or indices) 1..d_max, stored
/// dense. Used for check-node distributions Omega(x), relay-degree
/// distributions Gamma(x), their edge-perspective counterparts, source
/// selection q(x), window assignment theta(x) and class sizes Pi(x).
///
/// Immutable after construction; safe to share across threads.
class DegreeDistribution {
public:
  // coeffs[0] is the mass at degree 1. Rejects negative entries and
  // vectors whose sum deviates from 1 by more than 1e-9; within the
  // tolerance the vector is renormalized exactly once.
  DegreeDistribution(std::vector<double> coeffs, Perspective perspective,
                     DistKind kind, bool allow_zero_tail = true);

  static DegreeDistribution robust_soliton(int block_length, double c, double delta);

  const std::vector<double>& coefficients() const { return coeffs_; }
  double coeff(int degree) const { return coeffs_[static_cast<std::size_t>(degree) - 1]; }
  int max_degree() const { return static_cast<int>(coeffs_.size()); }
  Perspective perspective() const { return perspective_; }
  DistKind kind() const { return kind_; }

  DegreeDistribution to_edge_perspective() const;
  DegreeDistribution to_node_perspective() const;

  // Polynomial value: node perspective sum c_j x^j, edge perspective
  // sum c_j x^(j-1). x must lie in [0,1].
  double evaluate(double x) const;
  double derivative(double x) const;
  // Omega'(1) for a node-perspective distribution.
  double mean_degree() const;

  // Inverse-CDF sampling; returns a degree in 1..d_max.
  int sample(Rng& rng) const;

  // Text format: one `degree:probability` line per entry, sorted by degree.
  void save(std::ostream& os) const;
  static DegreeDistribution load(std::istream& is, Perspective perspective, DistKind kind);
  static DegreeDistribution load_file(const std::string& path, Perspective perspective,
                                      DistKind kind);

private:
  std::vector<double> coeffs_;
  std::vector<double> cdf_;
  Perspective perspective_;
  DistKind kind_;
};

} // namespace dlt
