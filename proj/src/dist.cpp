#include "dlt/dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dlt {

namespace {
constexpr double kNormTol = 1e-9;
}

DegreeDistribution::DegreeDistribution(std::vector<double> coeffs, Perspective perspective,
                                       DistKind kind, bool allow_zero_tail)
    : coeffs_(std::move(coeffs)), perspective_(perspective), kind_(kind) {
  if (coeffs_.empty())
    throw Error(Errc::invalid_parameter, "degree distribution needs at least one entry");
  double sum = 0.0;
  for (double c : coeffs_) {
    if (c < 0.0) throw Error(Errc::negative_mass, "negative probability mass");
    sum += c;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw Error(Errc::not_normalized, "coefficients sum to " + std::to_string(sum));
  if (!allow_zero_tail && coeffs_.back() == 0.0)
    throw Error(Errc::invalid_parameter, "zero mass at maximum degree");
  // Renormalize exactly once so repeated conversions cannot drift.
  for (double& c : coeffs_) c /= sum;
  cdf_.resize(coeffs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    acc += coeffs_[i];
    cdf_[i] = acc;
  }
  cdf_.back() = 1.0;
}

DegreeDistribution DegreeDistribution::robust_soliton(int block_length, double c,
                                                      double delta) {
  if (block_length < 1 || c <= 0.0 || delta <= 0.0 || delta >= 1.0)
    throw Error(Errc::invalid_parameter, "robust soliton parameters out of range");
  const int K = block_length;
  std::vector<double> mass(static_cast<std::size_t>(K), 0.0);
  mass[0] = 1.0 / K;
  for (int i = 2; i <= K; ++i) mass[i - 1] = 1.0 / (static_cast<double>(i) * (i - 1));
  const double R = c * std::log(static_cast<double>(K) / delta) * std::sqrt(K);
  const int spike = static_cast<int>(std::floor(K / R));
  for (int i = 1; i <= K; ++i) {
    if (i < spike)
      mass[i - 1] += R / (static_cast<double>(i) * K);
    else if (i == spike)
      mass[i - 1] += R * std::log(R / delta) / K;
  }
  double sum = 0.0;
  for (double m : mass) sum += m;
  for (double& m : mass) m /= sum;
  return DegreeDistribution(std::move(mass), Perspective::node, DistKind::check);
}

DegreeDistribution DegreeDistribution::to_edge_perspective() const {
  if (perspective_ != Perspective::node)
    throw Error(Errc::wrong_perspective, "edge conversion needs a node distribution");
  const double mean = mean_degree();
  std::vector<double> edge(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    edge[i] = static_cast<double>(i + 1) * coeffs_[i] / mean;
  return DegreeDistribution(std::move(edge), Perspective::edge, kind_);
}

DegreeDistribution DegreeDistribution::to_node_perspective() const {
  if (perspective_ != Perspective::edge)
    throw Error(Errc::wrong_perspective, "node conversion needs an edge distribution");
  std::vector<double> node(coeffs_.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    node[i] = coeffs_[i] / static_cast<double>(i + 1);
    sum += node[i];
  }
  for (double& n : node) n /= sum;
  return DegreeDistribution(std::move(node), Perspective::node, kind_);
}

double DegreeDistribution::evaluate(double x) const {
  if (x < 0.0 || x > 1.0) throw Error(Errc::domain_error, "argument outside [0,1]");
  double value = 0.0;
  // Horner over degrees d_max..1.
  for (std::size_t i = coeffs_.size(); i-- > 0;) value = value * x + coeffs_[i];
  return perspective_ == Perspective::node ? value * x : value;
}

double DegreeDistribution::derivative(double x) const {
  if (x < 0.0 || x > 1.0) throw Error(Errc::domain_error, "argument outside [0,1]");
  double value = 0.0;
  if (perspective_ == Perspective::node) {
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
      const double j = static_cast<double>(i + 1);
      value = value * x + j * coeffs_[i];
    }
  } else {
    for (std::size_t i = coeffs_.size(); i-- > 1;) {
      const double j = static_cast<double>(i);
      value = value * x + j * coeffs_[i];
    }
  }
  return value;
}

double DegreeDistribution::mean_degree() const {
  double mean = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    mean += static_cast<double>(i + 1) * coeffs_[i];
  return mean;
}

int DegreeDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(it - cdf_.begin()) + 1;
}

void DegreeDistribution::save(std::ostream& os) const {
  os.precision(17);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    os << (i + 1) << ":" << coeffs_[i] << "\n";
}

DegreeDistribution DegreeDistribution::load(std::istream& is, Perspective perspective,
                                            DistKind kind) {
  std::vector<double> coeffs;
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw Error(Errc::io_error, "expected degree:probability, got '" + tok + "'");
    const int degree = std::stoi(tok.substr(0, colon));
    const double p = std::stod(tok.substr(colon + 1));
    if (degree < 1) throw Error(Errc::io_error, "degree must be >= 1");
    if (coeffs.size() < static_cast<std::size_t>(degree)) coeffs.resize(degree, 0.0);
    coeffs[degree - 1] = p;
  }
  if (coeffs.empty()) throw Error(Errc::io_error, "empty distribution");
  return DegreeDistribution(std::move(coeffs), perspective, kind);
}

DegreeDistribution DegreeDistribution::load_file(const std::string& path,
                                                 Perspective perspective, DistKind kind) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::io_error, "cannot open " + path);
  return load(f, perspective, kind);
}

} // namespace dlt
