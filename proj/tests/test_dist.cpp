#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "dlt/dist.hpp"

using dlt::DegreeDistribution;
using dlt::DistKind;
using dlt::Error;
using dlt::Errc;
using dlt::Perspective;
using dlt::Rng;

namespace {

const std::vector<double> kGammaEep = {0.7520, 0.1685, 0.0455, 0.0340};

DegreeDistribution node_dist(std::vector<double> c) {
  return DegreeDistribution(std::move(c), Perspective::node, DistKind::check);
}

// Reference Robust Soliton, written out from the textbook definition.
std::vector<double> rsd_oracle(int K, double c, double delta) {
  std::vector<double> rho(static_cast<std::size_t>(K), 0.0);
  rho[0] = 1.0 / K;
  for (int i = 2; i <= K; ++i) rho[i - 1] = 1.0 / (double(i) * (i - 1));
  const double R = c * std::log(K / delta) * std::sqrt(double(K));
  const int spike = static_cast<int>(std::floor(K / R));
  std::vector<double> tau(static_cast<std::size_t>(K), 0.0);
  for (int i = 1; i <= K && i < spike; ++i) tau[i - 1] = R / (double(i) * K);
  if (spike >= 1 && spike <= K) tau[spike - 1] = R * std::log(R / delta) / K;
  double beta = 0.0;
  for (int i = 0; i < K; ++i) beta += rho[i] + tau[i];
  std::vector<double> mu(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) mu[i] = (rho[i] + tau[i]) / beta;
  return mu;
}

std::vector<double> random_dist(Rng& rng, int d_max) {
  std::vector<double> c(static_cast<std::size_t>(d_max));
  double sum = 0.0;
  for (auto& v : c) {
    v = rng.uniform() + 1e-3;
    sum += v;
  }
  for (auto& v : c) v /= sum;
  return c;
}

} // namespace

TEST_CASE("construction validates mass") {
  CHECK(node_dist({1.0}).max_degree() == 1);
  CHECK(node_dist(kGammaEep).max_degree() == 4);
  CHECK_THROWS_AS(node_dist({0.5, 0.6}), Error);
  CHECK_THROWS_AS(node_dist({1.2, -0.2}), Error);
  CHECK_THROWS_AS(node_dist({}), Error);
  CHECK_THROWS_AS(
      DegreeDistribution({0.5, 0.5, 0.0}, Perspective::node, DistKind::check, false), Error);
  // zero tail allowed by default
  CHECK(node_dist({0.5, 0.5, 0.0}).max_degree() == 3);
}

TEST_CASE("robust soliton") {
  CHECK(DegreeDistribution::robust_soliton(1, 0.05, 0.5).coefficients() ==
        std::vector<double>{1.0});

  SUBCASE("K=100 peaks at degree 2") {
    const auto d = DegreeDistribution::robust_soliton(100, 0.05, 0.5);
    for (int j = 1; j <= d.max_degree(); ++j)
      if (j != 2) CHECK(d.coeff(2) > d.coeff(j));
  }

  SUBCASE("matches the closed form") {
    for (int K : {4, 16, 100, 1000}) {
      const auto d = DegreeDistribution::robust_soliton(K, 0.05, 0.5);
      const auto expect = rsd_oracle(K, 0.05, 0.5);
      REQUIRE(d.max_degree() == K);
      for (int j = 1; j <= K; ++j)
        CHECK(d.coeff(j) == doctest::Approx(expect[j - 1]).epsilon(1e-12));
    }
  }

  SUBCASE("K=4 hand-computed vector") {
    // rho = (1/4, 1/2, 1/6, 1/12); R = 0.05 ln(8) sqrt(4); spike = floor(4/R) > 4
    // so tau_i = R/(4i) for all four degrees.
    const double R = 0.05 * std::log(4.0 / 0.5) * 2.0;
    double raw[4] = {0.25 + R / 4, 0.5 + R / 8, 1.0 / 6 + R / 12, 1.0 / 12 + R / 16};
    const double beta = raw[0] + raw[1] + raw[2] + raw[3];
    const auto d = DegreeDistribution::robust_soliton(4, 0.05, 0.5);
    for (int j = 1; j <= 4; ++j)
      CHECK(d.coeff(j) == doctest::Approx(raw[j - 1] / beta).epsilon(1e-12));
  }

  CHECK_THROWS_AS(DegreeDistribution::robust_soliton(0, 0.05, 0.5), Error);
  CHECK_THROWS_AS(DegreeDistribution::robust_soliton(10, -1.0, 0.5), Error);
  CHECK_THROWS_AS(DegreeDistribution::robust_soliton(10, 0.05, 1.5), Error);
}

TEST_CASE("perspective conversion") {
  SUBCASE("pure degree 2 is its own edge image") {
    const auto e = node_dist({0.0, 1.0}).to_edge_perspective();
    CHECK(e.coeff(1) == 0.0);
    CHECK(e.coeff(2) == 1.0);
    CHECK(e.perspective() == Perspective::edge);
  }
  SUBCASE("point mass at 1") {
    CHECK(node_dist({1.0}).to_edge_perspective().coeff(1) == 1.0);
    const auto n = DegreeDistribution({1.0}, Perspective::edge, DistKind::check)
                       .to_node_perspective();
    CHECK(n.coeff(1) == 1.0);
  }
  SUBCASE("four-term relay distribution") {
    const double mean = 1 * 0.7520 + 2 * 0.1685 + 3 * 0.0455 + 4 * 0.0340;
    CHECK(mean == doctest::Approx(1.3615).epsilon(1e-12));
    const auto g = node_dist(kGammaEep);
    CHECK(g.mean_degree() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(g.to_edge_perspective().coeff(1) ==
          doctest::Approx(0.7520 / mean).epsilon(1e-12));
  }
  SUBCASE("edge [0.5,0.5] to node") {
    const auto n = DegreeDistribution({0.5, 0.5}, Perspective::edge, DistKind::relay)
                       .to_node_perspective();
    CHECK(n.coeff(1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(n.coeff(2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("round trip on random distributions") {
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
      const auto c = random_dist(rng, 1 + int(rng.index(12)));
      const auto d = node_dist(c);
      const auto back = d.to_edge_perspective().to_node_perspective();
      REQUIRE(back.max_degree() == d.max_degree());
      for (int j = 1; j <= d.max_degree(); ++j)
        CHECK(back.coeff(j) == doctest::Approx(d.coeff(j)).epsilon(1e-12));
    }
  }
  SUBCASE("wrong perspective rejected") {
    CHECK_THROWS_AS(node_dist({1.0}).to_node_perspective(), Error);
    CHECK_THROWS_AS(
        DegreeDistribution({1.0}, Perspective::edge, DistKind::check).to_edge_perspective(),
        Error);
  }
}

TEST_CASE("evaluation") {
  CHECK(node_dist({0.0, 1.0}).evaluate(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(DegreeDistribution({1.0}, Perspective::edge, DistKind::check).derivative(0.3) == 0.0);
  CHECK(node_dist(kGammaEep).mean_degree() == doctest::Approx(1.3615).epsilon(1e-12));

  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto d = node_dist(random_dist(rng, 1 + int(rng.index(8))));
    CHECK(d.evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.to_edge_perspective().evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    // derivative at 1 of the node polynomial is the mean degree
    CHECK(d.derivative(1.0) == doctest::Approx(d.mean_degree()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(node_dist({1.0}).evaluate(1.5), Error);
  CHECK_THROWS_AS(node_dist({1.0}).evaluate(-0.1), Error);
  CHECK_THROWS_AS(node_dist({1.0}).derivative(2.0), Error);
}

TEST_CASE("sampling") {
  Rng rng(42);
  auto point = node_dist({1.0});
  for (int i = 0; i < 100; ++i) CHECK(point.sample(rng) == 1);

  SUBCASE("empirical mass within 3 sigma") {
    auto half = node_dist({0.5, 0.5});
    Rng r(123);
    long ones = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i)
      if (half.sample(r) == 1) ++ones;
    const double f = double(ones) / n;
    CHECK(f > 0.4985);
    CHECK(f < 0.5015);
  }

  SUBCASE("fixed seed reproduces the sequence") {
    auto d = DegreeDistribution::robust_soliton(100, 0.05, 0.5);
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i) CHECK(d.sample(a) == d.sample(b));
  }
}

TEST_CASE("serialization round trip") {
  const auto d = node_dist(kGammaEep);
  std::ostringstream os;
  d.save(os);
  std::istringstream is(os.str());
  const auto back = DegreeDistribution::load(is, Perspective::node, DistKind::relay);
  REQUIRE(back.max_degree() == 4);
  for (int j = 1; j <= 4; ++j)
    CHECK(back.coeff(j) == doctest::Approx(d.coeff(j)).epsilon(1e-15));

  std::istringstream commented("# relay distribution\n1:0.5\n\n2:0.5  # rest\n");
  const auto c = DegreeDistribution::load(commented, Perspective::node, DistKind::relay);
  CHECK(c.coeff(1) == 0.5);
  CHECK(c.coeff(2) == 0.5);

  std::istringstream bad("1=0.5\n");
  CHECK_THROWS_AS(DegreeDistribution::load(bad, Perspective::node, DistKind::relay), Error);
}
