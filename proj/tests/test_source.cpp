#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dlt/source.hpp"

using dlt::DegreeDistribution;
using dlt::DistKind;
using dlt::Error;
using dlt::Perspective;
using dlt::Rng;
using dlt::SourceConfig;
using dlt::SourceEncoder;

namespace {

DegreeDistribution omega(std::vector<double> c) {
  return DegreeDistribution(std::move(c), Perspective::node, DistKind::check);
}

} // namespace

TEST_CASE("class_of_round") {
  CHECK(dlt::class_of_round(1, 4) == 1);
  CHECK(dlt::class_of_round(4, 4) == 4);
  CHECK(dlt::class_of_round(5, 4) == 1);
  CHECK(dlt::class_of_round(6, 4) == 2);
  CHECK(dlt::class_of_round(1, 1) == 1);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(SourceEncoder({1, 10, 4, omega({1.0}), false, true}, Rng(1)), Error);
  CHECK_THROWS_AS(SourceEncoder({1, 0, 1, omega({1.0}), false, true}, Rng(1)), Error);
}

TEST_CASE("partitioned encoding") {
  SUBCASE("class size 1 forces the class bit") {
    SourceEncoder enc({1, 4, 4, omega({0.2, 0.3, 0.5}), false, true}, Rng(3));
    for (long n = 1; n <= 12; ++n) {
      const auto sym = enc.encode_round(n);
      const int cls = dlt::class_of_round(n, 4);
      CHECK(sym.class_index == cls);
      REQUIRE(sym.neighbors.size() == 1);
      CHECK(sym.neighbors[0] == static_cast<std::uint32_t>(cls - 1));
    }
  }

  SUBCASE("degree-1 symbol stays inside its class range") {
    SourceEncoder enc({1, 8, 4, omega({1.0}), false, true}, Rng(4));
    const auto sym = enc.encode_round(3);
    REQUIRE(sym.neighbors.size() == 1);
    CHECK(sym.neighbors[0] >= 4);
    CHECK(sym.neighbors[0] < 6);
  }

  SUBCASE("distinct classes over D consecutive rounds, ranges disjoint") {
    SourceEncoder enc({1, 32, 4, omega({0.5, 0.5}), false, true}, Rng(5));
    std::set<int> classes;
    for (long n = 9; n < 13; ++n) {
      const auto sym = enc.encode_round(n);
      classes.insert(sym.class_index);
      for (auto id : sym.neighbors) {
        CHECK(id >= static_cast<std::uint32_t>((sym.class_index - 1) * 8));
        CHECK(id < static_cast<std::uint32_t>(sym.class_index * 8));
      }
    }
    CHECK(classes.size() == 4);
  }

  SUBCASE("selection within a class is uniform") {
    SourceEncoder enc({1, 16, 4, omega({1.0}), false, true}, Rng(6));
    long counts[4] = {0, 0, 0, 0};
    const long trials = 100000;
    for (long t = 0; t < trials; ++t) {
      const auto sym = enc.encode_round(2); // class 2: bits 4..7
      ++counts[sym.neighbors[0] - 4];
    }
    const double p = 0.25;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    for (long c : counts)
      CHECK(std::abs(double(c) / trials - p) < 3 * sigma);
  }

  SUBCASE("neighbors are distinct and sorted") {
    SourceEncoder enc({1, 40, 4, omega({0, 0, 0, 0, 0, 0, 0, 0, 0, 1.0}), false, true},
                      Rng(7));
    for (long n = 1; n <= 50; ++n) {
      const auto sym = enc.encode_round(n);
      CHECK(sym.neighbors.size() == 10); // degree-10 point mass, class size 10
      std::set<std::uint32_t> uniq(sym.neighbors.begin(), sym.neighbors.end());
      CHECK(uniq.size() == sym.neighbors.size());
      CHECK(std::is_sorted(sym.neighbors.begin(), sym.neighbors.end()));
    }
  }
}

TEST_CASE("degree clamp") {
  // degree-5 point mass, class size 2
  auto big = omega({0, 0, 0, 0, 1.0});
  SourceEncoder clamped({1, 8, 4, big, false, true}, Rng(8));
  CHECK(clamped.encode_round(1).neighbors.size() == 2);
  SourceEncoder strict({1, 8, 4, big, false, false}, Rng(8));
  CHECK_THROWS_AS(strict.encode_round(1), Error);
}

TEST_CASE("conventional encoding") {
  SUBCASE("single bit") {
    SourceEncoder enc({1, 1, 1, omega({0.5, 0.5}), false, true}, Rng(9));
    for (int t = 0; t < 20; ++t) {
      const auto sym = enc.encode_conventional();
      CHECK(sym.class_index == 0);
      REQUIRE(sym.neighbors.size() == 1);
      CHECK(sym.neighbors[0] == 0);
    }
  }
  SUBCASE("degree 2 of 2") {
    SourceEncoder enc({1, 2, 1, omega({0.0, 1.0}), false, true}, Rng(10));
    const auto sym = enc.encode_conventional();
    CHECK(sym.neighbors == std::vector<std::uint32_t>{0, 1});
  }
  SUBCASE("degree histogram matches omega") {
    auto dist = omega({0.3, 0.3, 0.4});
    SourceEncoder enc({1, 100, 1, dist, false, true}, Rng(11));
    long counts[3] = {0, 0, 0};
    const long trials = 1000000;
    for (long t = 0; t < trials; ++t)
      ++counts[enc.encode_conventional().neighbors.size() - 1];
    for (int j = 1; j <= 3; ++j) {
      const double p = dist.coeff(j);
      const double sigma = std::sqrt(p * (1 - p) / trials);
      CHECK(std::abs(double(counts[j - 1]) / trials - p) < 3 * sigma);
    }
  }
}

TEST_CASE("payload tracking") {
  SourceConfig cfg{1, 24, 4, omega({0.2, 0.5, 0.3}), true, true};
  SourceEncoder enc(cfg, Rng(12));
  REQUIRE(enc.bits().size() == 24);
  for (long n = 1; n <= 40; ++n) {
    const auto sym = enc.encode_round(n);
    REQUIRE(sym.has_payload);
    std::uint8_t expect = 0;
    for (auto id : sym.neighbors) expect ^= enc.bits()[id];
    CHECK(sym.payload == expect);
  }
  SourceEncoder graph_only({1, 24, 4, omega({1.0}), false, true}, Rng(13));
  CHECK_FALSE(graph_only.encode_round(1).has_payload);
}
