#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "throwbox/analytics.hpp"
#include "throwbox/bnw.hpp"
#include "throwbox/stats.hpp"

using namespace throwbox;

namespace {

// Five places, three agents with three connections each (0-based ids):
// A1 {0,1,2}, A2 {0,2,3}, A3 {2,3,4}.
BipartiteGraph five_place_example() {
  BipartiteGraph g(5);
  g.add_agent({0, 1, 2});
  g.add_agent({0, 2, 3});
  g.add_agent({2, 3, 4});
  return g;
}

std::int64_t pair_sum(const WeightMatrix& w) { return w.sum() / 2; }

std::int64_t expected_pairs(const BipartiteGraph& g) {
  std::int64_t total = 0;
  for (const auto& s : g.agent_connections) {
    std::map<PlaceId, std::int64_t> n;
    for (PlaceId p : s) ++n[p];
    const auto k = static_cast<std::int64_t>(s.size());
    total += k * (k - 1) / 2;
    for (const auto& [p, c] : n) total -= c * (c - 1) / 2;
  }
  return total;
}

}  // namespace

TEST_CASE("empty growth keeps unit degrees") {
  RngStream rng(1);
  const auto g = grow_preferential(10, VisitDistribution::constant(3), 0, {}, rng);
  CHECK(g.n_agents() == 0);
  CHECK((g.place_degrees.array() == 1).all());
  CHECK(project(g).sum() == 0);
}

TEST_CASE("agents connecting to every place") {
  RngStream rng(2);
  const auto g = grow_preferential(5, VisitDistribution::constant(5), 40, {}, rng, ConnectionMode::distinct);
  const auto w = project(g);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(w(i, j) == (i == j ? 0 : 40));
  }
}

TEST_CASE("projection of small graphs") {
  BipartiteGraph one(5);
  one.add_agent({1, 2, 3});
  const auto w1 = project(one);
  CHECK(w1(1, 2) == 1);
  CHECK(w1(1, 3) == 1);
  CHECK(w1(2, 3) == 1);
  CHECK(w1.sum() == 6);

  BipartiteGraph two(6);
  two.add_agent({0, 1, 2, 3});
  two.add_agent({3, 2, 1, 0});
  const auto w2 = project(two);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(w2(i, j) == (i == j ? 0 : 2));
  }
  CHECK(w2.row(4).sum() == 0);
}

TEST_CASE("parallel connections through the same agent multiply") {
  BipartiteGraph g(3);
  g.add_agent({0, 0, 1, 1, 1, 2});
  const auto w = project(g);
  CHECK(w(0, 1) == 6);
  CHECK(w(0, 2) == 2);
  CHECK(w(1, 2) == 3);
  CHECK(w.diagonal().sum() == 0);
  CHECK(pair_sum(w) == expected_pairs(g));
  CHECK(g.place_degrees[1] == 4);
}

TEST_CASE("five-place example: projection, threshold 2, components") {
  const auto g = five_place_example();
  const auto w = project(g);
  WeightMatrix expected(5, 5);
  expected << 0, 1, 2, 1, 0,
              1, 0, 1, 0, 0,
              2, 1, 0, 2, 1,
              1, 0, 2, 0, 1,
              0, 0, 1, 1, 0;
  CHECK(w == expected);

  const auto tp = threshold(w, 2.0, 1);
  std::ostringstream edges;
  write_threshold_edges(edges, tp);
  CHECK(edges.str() == "0 2\n2 3\n");

  const auto c = components(tp);
  CHECK(c.largest == 3);
  CHECK(c.count == 3);
  CHECK(c.count + c.largest == 6);
  CHECK(c.sizes == std::vector<int>{3, 1, 1});
  CHECK(c.label[0] == c.label[2]);
  CHECK(c.label[2] == c.label[3]);
  CHECK(c.label[1] != c.label[0]);
  CHECK(theorem_holds(tp));

  std::ostringstream pe;
  write_projection_edges(pe, w);
  CHECK(pe.str() == "0 1 1\n0 2 2\n0 3 1\n1 2 1\n2 3 2\n2 4 1\n3 4 1\n");
}

TEST_CASE("threshold extremes") {
  const auto w = project(five_place_example());
  const auto all = threshold(w, 0.0, 3);
  CHECK(degrees(all).sum() == 5 * 4);
  const auto c_all = components(all);
  CHECK(c_all.count == 1);
  CHECK(c_all.largest == 5);

  const auto none = threshold(w, 1.0, 3);
  CHECK(degrees(none).sum() == 0);
  const auto c_none = components(none);
  CHECK(c_none.count == 5);
  CHECK(c_none.largest == 1);
  CHECK(theorem_holds(none));

  CHECK_THROWS(threshold(w, -0.1, 1));
  CHECK_THROWS(threshold(w, 0.1, 0));
}

TEST_CASE("two disjoint edges break the identity") {
  ThresholdedProjection tp;
  tp.adjacency = Adjacency::Constant(6, 6, false);
  tp.adjacency(0, 1) = tp.adjacency(1, 0) = true;
  tp.adjacency(2, 3) = tp.adjacency(3, 2) = true;
  CHECK_FALSE(theorem_holds(tp));
}

TEST_CASE("weight and degree conservation") {
  RngStream rng(3);
  for (auto mode : {ConnectionMode::distinct, ConnectionMode::multiset}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto dist = VisitDistribution::uniform(2, 9);
      const auto g = grow_preferential(30, dist, 200, {}, rng, mode);
      const auto w = project(g);
      CHECK(pair_sum(w) == expected_pairs(g));
      std::int64_t k_total = 0;
      for (const auto& s : g.agent_connections) k_total += static_cast<std::int64_t>(s.size());
      CHECK((g.place_degrees.array() - 1).sum() == k_total);
      CHECK(w == w.transpose());

      WeightMatrix inc = WeightMatrix::Zero(30, 30);
      for (const auto& s : g.agent_connections) accumulate_projection(inc, s);
      CHECK(inc == w);
    }
  }
}

TEST_CASE("Dirichlet growth") {
  RngStream rng(4);
  SUBCASE("N = 2 marginal is uniform") {
    std::vector<double> th;
    for (int i = 0; i < 5000; ++i) th.push_back(grow_dirichlet(2, VisitDistribution::constant(1), 0, rng).theta[0]);
    CHECK(ks_one_sample(th, [](double x) { return x; }) < 1.63 / std::sqrt(5000.0));
  }
  SUBCASE("theta marginal is Beta(1, N-1)") {
    std::vector<double> th;
    for (int i = 0; i < 2000; ++i) {
      const auto d = rng.symmetric_dirichlet(100, 1.0);
      th.push_back(d[i % 100]);
    }
    CHECK(ks_one_sample(th, [](double x) { return beta_one_cdf(x, 100); }) < 1.63 / std::sqrt(2000.0));
  }
  SUBCASE("distinct connections") {
    const auto g = grow_dirichlet(20, VisitDistribution::constant(20), 10, rng, ConnectionMode::distinct).graph;
    for (const auto& s : g.agent_connections) CHECK(std::set<PlaceId>(s.begin(), s.end()).size() == 20);
  }
}

TEST_CASE("uniform attractiveness concentrates degrees near 1 + T mu / N") {
  // Growth with theta fixed at 1/N is growth with alpha = 0.
  RngStream rng(5);
  const auto g = grow_preferential(50, VisitDistribution::constant(10), 2000, {0.0, 0.0}, rng);
  const double expect = 1.0 + 2000.0 * 10.0 / 50.0;
  const double sd = std::sqrt(2000.0 * 10.0 * (1.0 / 50) * (49.0 / 50));
  for (int i = 0; i < 50; ++i) CHECK(std::abs(static_cast<double>(g.place_degrees[i]) - expect) < 5 * sd);
}

TEST_CASE("largest-component time series") {
  RngStream rng(6);
  const auto dist = VisitDistribution::constant(5);
  SUBCASE("v = 0 reaches N") {
    const auto s = gb_timeseries(20, dist, 0.0, 50, {}, rng);
    CHECK(s.back().largest == 20);
    CHECK(s.size() == 50);
  }
  SUBCASE("large v stays at 1") {
    const auto s = gb_timeseries(20, dist, 100.0, 50, {}, rng, ConnectionMode::multiset, 7);
    for (const auto& x : s) CHECK(x.largest == 1);
    CHECK(s.back().t == 50);
    CHECK(s.size() == 8);
  }
}

TEST_CASE("preferential and Dirichlet growth agree on place degrees (small scale)") {
  RngStream rng(7);
  std::vector<double> a, b;
  for (int r = 0; r < 150; ++r) {
    const auto gp = grow_preferential(30, VisitDistribution::constant(6), 200, {}, rng);
    const auto gd = grow_dirichlet(30, VisitDistribution::constant(6), 200, rng).graph;
    for (int i = 0; i < 30; ++i) {
      a.push_back(static_cast<double>(gp.place_degrees[i]));
      b.push_back(static_cast<double>(gd.place_degrees[i]));
    }
  }
  CHECK(ks_two_sample(a, b) < 0.05);
}
