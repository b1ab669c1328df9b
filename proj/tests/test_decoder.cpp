#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "dlt/decoder.hpp"

using namespace dlt;

namespace {

std::vector<VarLabel> labels(int k, int source_id = 1) {
  return std::vector<VarLabel>(static_cast<std::size_t>(k), VarLabel{source_id, 0});
}

// Variables recoverable by full GF(2) elimination: v is determined exactly
// when the unit vector e_v lies in the row space of the check matrix.
std::vector<bool> ml_recoverable(int k, const std::vector<std::uint32_t>& rows) {
  auto rank_of = [](std::vector<std::uint32_t> m) {
    int rank = 0;
    for (int bit = 0; bit < 32; ++bit) {
      const std::uint32_t mask = 1u << bit;
      auto pivot = std::find_if(m.begin() + rank, m.end(),
                                [&](std::uint32_t r) { return r & mask; });
      if (pivot == m.end()) continue;
      std::swap(*pivot, m[rank]);
      for (auto& r : m)
        if ((r & mask) && &r != &m[rank]) r ^= m[rank];
      ++rank;
    }
    return rank;
  };
  const int base = rank_of(rows);
  std::vector<bool> out(static_cast<std::size_t>(k));
  for (int v = 0; v < k; ++v) {
    auto extended = rows;
    extended.push_back(1u << v);
    out[static_cast<std::size_t>(v)] = rank_of(extended) == base;
  }
  return out;
}

void add(DecodingGraph& g, std::vector<std::uint64_t> neighbors, std::uint8_t payload = 0) {
  g.add_check(neighbors, payload);
}

} // namespace

TEST_CASE("hand-traceable peeling") {
  SUBCASE("chain of two") {
    DecodingGraph g(labels(2), false);
    add(g, {0});
    add(g, {0, 1});
    g.peel();
    CHECK(g.recovered_count() == 2);
    CHECK(g.report().iterations == 2);
  }
  SUBCASE("stopping set") {
    DecodingGraph g(labels(2), false);
    add(g, {0, 1});
    g.peel();
    CHECK(g.recovered_count() == 0);
    CHECK(g.report().overall_erasure_rate == 1.0);
  }
  SUBCASE("four-variable chain") {
    DecodingGraph g(labels(4), false);
    add(g, {0});
    add(g, {0, 1});
    add(g, {1, 2});
    add(g, {2, 3});
    g.peel();
    CHECK(g.recovered_count() == 4);
    const auto ml = ml_recoverable(4, {0b0001, 0b0011, 0b0110, 0b1100});
    CHECK(std::all_of(ml.begin(), ml.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("incremental check addition") {
  DecodingGraph g(labels(3), false);
  add(g, {0, 1});
  g.peel();
  CHECK(g.recovered_count() == 0);
  add(g, {1}); // releases the stopping set
  g.peel();
  CHECK(g.recovered_count() == 2);
  // degree-0 residual check and duplicates are inert but accepted
  add(g, {0, 1});
  add(g, {0, 1});
  g.peel();
  CHECK(g.recovered_count() == 2);
  CHECK(g.num_checks() == 4);
  CHECK(g.connection_counts()[0] == 3);
  CHECK(g.connection_counts()[2] == 0);
}

TEST_CASE("erasure rate accounting") {
  std::vector<VarLabel> l = {{1, 1}, {1, 1}, {2, 2}, {2, 2}};
  DecodingGraph g(l, false);
  add(g, {0});
  add(g, {2});
  g.peel();
  const auto r = g.report();
  CHECK(erasure_rate(r, RateScope::overall) == 0.5);
  CHECK(erasure_rate(r, RateScope::source, 1) == 0.5);
  CHECK(erasure_rate(r, RateScope::source, 2) == 0.5);
  CHECK(erasure_rate(r, RateScope::importance_class, 1) == 0.5);
  // weighted per-source rates reproduce the overall rate
  double acc = 0.0;
  for (int i = 1; i <= 2; ++i) acc += 0.5 * erasure_rate(r, RateScope::source, i);
  CHECK(acc == r.overall_erasure_rate);
  CHECK_THROWS_AS(erasure_rate(r, RateScope::source, 3), Error);
  CHECK_THROWS_AS(erasure_rate(r, RateScope::importance_class, 9), Error);
}

TEST_CASE("order independence on random graphs") {
  Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    const int k = 4 + int(rng.index(13)); // 4..16
    const int n = 1 + int(rng.index(static_cast<std::size_t>(2 * k)));
    std::vector<std::vector<std::uint64_t>> checks;
    for (int c = 0; c < n; ++c) {
      const int d = 1 + int(rng.index(4));
      std::vector<std::uint64_t> nb;
      for (int j = 0; j < d; ++j) nb.push_back(rng.index(static_cast<std::size_t>(k)));
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      checks.push_back(std::move(nb));
    }
    DecodingGraph fifo(labels(k), false);
    DecodingGraph random_order(labels(k), false);
    for (const auto& c : checks) {
      fifo.add_check(c);
      random_order.add_check(c);
    }
    fifo.peel();
    Rng shuffle(rng.next_u64());
    random_order.peel(&shuffle);
    CHECK(fifo.recovered() == random_order.recovered());
  }
}

TEST_CASE("peeling recovers a subset of the ML-recoverable set") {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const int k = 4 + int(rng.index(13));
    const int n = 1 + int(rng.index(static_cast<std::size_t>(2 * k)));
    DecodingGraph g(labels(k), false);
    std::vector<std::uint32_t> rows;
    for (int c = 0; c < n; ++c) {
      const int d = 1 + int(rng.index(5));
      std::uint32_t mask = 0;
      for (int j = 0; j < d; ++j) mask |= 1u << rng.index(static_cast<std::size_t>(k));
      std::vector<std::uint64_t> nb;
      for (int v = 0; v < k; ++v)
        if (mask & (1u << v)) nb.push_back(static_cast<std::uint64_t>(v));
      g.add_check(nb);
      rows.push_back(mask);
    }
    g.peel();
    const auto ml = ml_recoverable(k, rows);
    for (int v = 0; v < k; ++v)
      if (g.recovered()[static_cast<std::size_t>(v)]) CHECK(ml[static_cast<std::size_t>(v)]);
  }
}

TEST_CASE("monotonicity under added checks") {
  Rng rng(55);
  DecodingGraph g(labels(32), false);
  long last = 0;
  for (int c = 0; c < 120; ++c) {
    const int d = 1 + int(rng.index(3));
    std::vector<std::uint64_t> nb;
    for (int j = 0; j < d; ++j) nb.push_back(rng.index(32));
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    g.add_check(nb);
    g.peel();
    CHECK(g.recovered_count() >= last);
    last = g.recovered_count();
  }
}

TEST_CASE("payload verification") {
  const int k = 64;
  Rng rng(911);
  std::vector<std::uint8_t> truth(static_cast<std::size_t>(k));
  for (auto& b : truth) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);

  DecodingGraph g(labels(k), true);
  for (int c = 0; c < 400; ++c) {
    const int d = 1 + int(rng.index(6));
    std::vector<std::uint64_t> nb;
    for (int j = 0; j < d; ++j) nb.push_back(rng.index(static_cast<std::size_t>(k)));
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    std::uint8_t payload = 0;
    for (auto v : nb) payload ^= truth[v];
    g.add_check(nb, payload);
  }
  g.peel();
  CHECK(g.recovered_count() == k); // 400 checks over 64 bits decodes fully
  CHECK(g.verify_payload(truth));

  SUBCASE("fault injection is caught") {
    DecodingGraph bad(labels(2), true);
    bad.add_check({0}, static_cast<std::uint8_t>(truth[0] ^ 1u));
    bad.peel();
    CHECK_FALSE(bad.verify_payload(truth));
  }
  SUBCASE("graph-only mode rejects verification") {
    DecodingGraph plain(labels(2), false);
    CHECK_THROWS_AS(plain.verify_payload(truth), Error);
  }
}
