#include <doctest.h>

#include <stdexcept>

#include "throwbox/sweep.hpp"

using namespace throwbox;

TEST_CASE("axis parsing") {
  const auto a = parse_sweep_axis("p=0.01:0.2:0.01");
  CHECK(a.key == "p");
  REQUIRE(a.values.size() == 20);
  CHECK(a.values.front() == "0.01");
  CHECK(a.values.back() == "0.2");
  CHECK(parse_sweep_axis("delta=0,1,2,4").values == std::vector<std::string>{"0", "1", "2", "4"});
  CHECK(parse_sweep_axis("visits_per_agent=constant:20|empirical:10=0.5,30=0.5").values ==
        std::vector<std::string>{"constant:20", "empirical:10=0.5,30=0.5"});
  CHECK(parse_sweep_axis("visits_per_agent=uniform:1:9").values == std::vector<std::string>{"uniform:1:9"});
  CHECK_THROWS(parse_sweep_axis("p"));
  CHECK_THROWS(parse_sweep_axis("=1"));
  CHECK_THROWS(parse_sweep_axis("p=1:0:0.1"));
}

TEST_CASE("grid expansion") {
  CHECK(expand_grid({}).size() == 1);
  const auto g = expand_grid({{"p", {"0.1", "0.2", "0.3"}}, {"delta", {"0", "1", "2", "4"}}});
  REQUIRE(g.size() == 12);
  CHECK(g[0] == SweepCell{{"p", "0.1"}, {"delta", "0"}});
  CHECK(g[1] == SweepCell{{"p", "0.1"}, {"delta", "1"}});
  CHECK(g[11] == SweepCell{{"p", "0.3"}, {"delta", "4"}});
}

TEST_CASE("cells run in order with per-cell errors") {
  const auto cells = expand_grid({{"x", {"1", "2", "3", "4", "5", "6"}}});
  std::function<int(const SweepCell&)> fn = [](const SweepCell& c) {
    const int x = std::stoi(c.front().second);
    if (x == 4) throw std::runtime_error("bad cell");
    return x * x;
  };
  for (int par : {1, 3}) {
    int reported = 0;
    const auto out = run_cells<int>(cells, fn, par, [&](std::size_t, const CellOutcome<int>&) { ++reported; });
    CHECK(reported == 6);
    REQUIRE(out.size() == 6);
    CHECK(*out[0].result == 1);
    CHECK(*out[5].result == 36);
    CHECK_FALSE(out[3].result.has_value());
    CHECK(out[3].error == "bad cell");
  }
}
