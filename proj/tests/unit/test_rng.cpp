#include <doctest.h>

#include <cmath>
#include <vector>

#include "throwbox/rng.hpp"
#include "throwbox/stats.hpp"

using namespace throwbox;

TEST_CASE("same seed, same sequence") {
  RngStream a(99), b(99), c(100);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("derived variates are reproducible") {
  RngStream a(5), b(5);
  for (int i = 0; i < 200; ++i) {
    CHECK(a.gamma(0.7) == b.gamma(0.7));
    CHECK(a.beta(1, 99) == b.beta(1, 99));
    CHECK(a.standard_normal() == b.standard_normal());
  }
  CHECK(a.symmetric_dirichlet(10, 1.0) == b.symmetric_dirichlet(10, 1.0));
}

TEST_CASE("uniform_index is unbiased over a small range") {
  RngStream rng(3);
  const int n = 70000;
  std::vector<int> counts(7, 0);
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_index(7)];
  const double p = 1.0 / 7, sigma = std::sqrt(p * (1 - p) / n);
  for (int c : counts) CHECK(std::abs(c / double(n) - p) < 4 * sigma);
}

TEST_CASE("categorical frequencies") {
  RngStream rng(4);
  const std::vector<double> w{1, 0, 3};
  std::vector<int> counts(3, 0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(w)];
  CHECK(counts[1] == 0);
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::abs(counts[0] / double(n) - 0.25) < 4 * sigma);
  CHECK_THROWS(rng.categorical(std::vector<double>{0, 0}));
}

TEST_CASE("gamma and beta moments") {
  RngStream rng(8);
  for (double shape : {0.3, 1.0, 4.5}) {
    std::vector<double> xs;
    for (int i = 0; i < 50000; ++i) xs.push_back(rng.gamma(shape));
    const auto m = mean_sem(xs);
    CHECK(std::abs(m.mean - shape) < 4 * std::sqrt(shape / 50000.0));
  }
  std::vector<double> bs;
  for (int i = 0; i < 50000; ++i) bs.push_back(rng.beta(2, 5));
  const double mean = 2.0 / 7.0, var = 2.0 * 5.0 / (49.0 * 8.0);
  CHECK(std::abs(mean_sem(bs).mean - mean) < 4 * std::sqrt(var / 50000.0));
}

TEST_CASE("symmetric Dirichlet lies on the simplex; N = 2 marginal is uniform") {
  RngStream rng(12);
  std::vector<double> first;
  for (int i = 0; i < 20000; ++i) {
    const auto th = rng.symmetric_dirichlet(2, 1.0);
    CHECK(th.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((th.array() > 0).all());
    first.push_back(th[0]);
  }
  const double d = ks_one_sample(first, [](double x) { return x; });
  CHECK(d < 1.63 / std::sqrt(20000.0));
}
