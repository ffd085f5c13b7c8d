#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "throwbox/mobility.hpp"

using namespace throwbox;

namespace {

CountVector counts(std::initializer_list<std::int64_t> xs) {
  CountVector c(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) c[i++] = x;
  return c;
}

}  // namespace

TEST_CASE("selection probabilities: worked values") {
  const auto eq = selection_probabilities(counts({1, 1, 1, 1}), {0.0, 1.0});
  for (int i = 0; i < 4; ++i) CHECK(eq[i] == doctest::Approx(0.25));

  const auto lin = selection_probabilities(counts({3, 1}), {0.0, 1.0});
  CHECK(lin[0] == doctest::Approx(0.75));
  CHECK(lin[1] == doctest::Approx(0.25));

  const auto flat = selection_probabilities(counts({3, 1}), {1e6, 1.0});
  CHECK(std::abs(flat[0] - 0.5) < 1e-5);
  CHECK(std::abs(flat[1] - 0.5) < 1e-5);

  const auto sq = selection_probabilities(counts({3, 1}), {0.0, 2.0});
  CHECK(sq[0] == doctest::Approx(0.9));
  CHECK(sq[1] == doctest::Approx(0.1));
}

TEST_CASE("selection probabilities: invariants") {
  RngStream rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(50));
    CountVector c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<std::int64_t>(rng.uniform_index(40));
    c[0] += 1;
    const MobilityParams mp{rng.uniform() * 3, rng.uniform() * 3};
    const auto pr = selection_probabilities(c, mp);
    CHECK(std::abs(pr.sum() - 1.0) < 1e-12);

    const auto uniform = selection_probabilities(c, {mp.randomness, 0.0});
    for (int i = 0; i < n; ++i) CHECK(uniform[i] == doctest::Approx(1.0 / n));

    // Monotone in one count with the others fixed.
    CountVector bumped = c;
    bumped[1] += 5;
    CHECK(selection_probabilities(bumped, mp)[1] >= pr[1]);

    // Common scaling of d_i + delta leaves the vector unchanged (integer
    // scaling with delta = 0).
    const auto base = selection_probabilities(c, {0.0, mp.clustering_exp});
    const auto scaled = selection_probabilities((c * 3).eval(), {0.0, mp.clustering_exp});
    CHECK((base - scaled).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("selection probabilities: invalid inputs") {
  CHECK_THROWS_AS(selection_probabilities(counts({0, 0}), {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(selection_probabilities(counts({-1, 2}), {0.0, 1.0}), std::invalid_argument);
  CHECK_NOTHROW(selection_probabilities(counts({0, 0}), {1.0, 1.0}));
}

TEST_CASE("distinct sampling") {
  RngStream rng(2);
  SUBCASE("k = N exhausts the places") {
    auto s = sample_distinct_places(initial_counts(5), {}, 5, rng);
    std::sort(s.begin(), s.end());
    CHECK(s == std::vector<PlaceId>{0, 1, 2, 3, 4});
  }
  SUBCASE("k > N is an error") { CHECK_THROWS(sample_distinct_places(initial_counts(5), {}, 6, rng)); }
  SUBCASE("draws are distinct") {
    const CountVector c = counts({50, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    for (int i = 0; i < 1000; ++i) {
      const auto s = sample_distinct_places(c, {}, 6, rng);
      CHECK(std::set<PlaceId>(s.begin(), s.end()).size() == 6);
    }
  }
  SUBCASE("k = 1 is a single categorical draw") {
    const CountVector c = counts({1, 2, 3, 4});
    std::vector<int> hits(4, 0);
    const int n = 40000;
    for (int i = 0; i < n; ++i) ++hits[sample_distinct_places(c, {}, 1, rng)[0]];
    for (int i = 0; i < 4; ++i) {
      const double p = (i + 1) / 10.0;
      CHECK(std::abs(hits[i] / double(n) - p) < 4 * std::sqrt(p * (1 - p) / n));
    }
  }
}

TEST_CASE("distinct sampling: uniform inclusion frequency") {
  RngStream rng(3);
  const int n = 100000;
  std::vector<int> hits(100, 0);
  const CountVector c = initial_counts(100);
  for (int i = 0; i < n; ++i) {
    for (PlaceId p : sample_distinct_places(c, {}, 20, rng)) ++hits[static_cast<std::size_t>(p)];
  }
  const double sigma = std::sqrt(0.2 * 0.8 / n);
  for (int h : hits) CHECK(std::abs(h / double(n) - 0.2) < 3 * sigma);
}

TEST_CASE("sampling with replacement follows the selection probabilities") {
  RngStream rng(4);
  const CountVector c = counts({1, 0, 3});
  std::vector<int> hits(3, 0);
  const int n = 40000;
  for (PlaceId p : sample_places_with_replacement(c, {}, n, rng)) ++hits[static_cast<std::size_t>(p)];
  CHECK(hits[1] == 0);
  CHECK(std::abs(hits[0] / double(n) - 0.25) < 4 * std::sqrt(0.25 * 0.75 / n));
}

TEST_CASE("single draw honours the exclusion mask") {
  RngStream rng(5);
  const std::vector<bool> excluded{true, false, true};
  for (int i = 0; i < 100; ++i) CHECK(sample_place(initial_counts(3), {}, &excluded, rng) == 1);
  const std::vector<bool> all(3, true);
  CHECK_THROWS(sample_place(initial_counts(3), {}, &all, rng));
}
