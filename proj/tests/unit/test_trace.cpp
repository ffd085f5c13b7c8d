#include <doctest.h>

#include <set>
#include <sstream>
#include <vector>

#include "throwbox/stats.hpp"
#include "throwbox/trace.hpp"

using namespace throwbox;

namespace {

TraceRecord rec(const std::string& a, double t, double x, double y) { return {a, t, x, y}; }

std::vector<PlaceId> places_of(const VisitSequence& v) {
  std::vector<PlaceId> out;
  for (const auto& x : v) out.push_back(x.place);
  return out;
}

}  // namespace

TEST_CASE("timestamps") {
  CHECK(parse_timestamp("0") == 0.0);
  CHECK(parse_timestamp("1204360200.5") == 1204360200.5);
  CHECK(parse_timestamp("1970-01-02T00:00:00Z") == 86400.0);
  CHECK(parse_timestamp("2008-03-01T08:30:00Z") == 1204360200.0);
  CHECK(parse_timestamp("2008-03-01 08:30:00") == 1204360200.0);
  CHECK(parse_timestamp("2008-03-01T09:30:00+01:00") == 1204360200.0);
  CHECK(parse_timestamp("2008-03-01T08:30:00.25Z") == 1204360200.25);
  CHECK_THROWS(parse_timestamp("yesterday"));
  CHECK_THROWS(parse_timestamp("2008-02-30T00:00:00Z"));
  CHECK_THROWS(parse_timestamp("2008-03-01T25:00:00Z"));
}

TEST_CASE("trace parsing") {
  std::istringstream in("# comment\nagent_id,timestamp,x,y\na,10,1.5,2\n\nb,2008-03-01T00:00:00Z,-3,4\n");
  const auto t = parse_trace(in);
  REQUIRE(t.size() == 2);
  CHECK(t[0].agent_id == "a");
  CHECK(t[0].x == 1.5);
  CHECK(t[1].y == 4.0);
  std::istringstream bad("a,10,1\n");
  CHECK_THROWS(parse_trace(bad));
  std::istringstream bad_ts("a,noon,1,2\n");
  CHECK_THROWS(parse_trace(bad_ts));
}

TEST_CASE("day splitting") {
  CHECK(split_days({}).empty());

  const std::vector<TraceRecord> one_day{rec("A", 1000, 0, 0), rec("B", 500, 1, 1)};
  const auto same = split_days(one_day);
  REQUIRE(same.size() == 2);
  CHECK(same[0].agent_id == "A");
  CHECK(same[0].timestamp == 1000);

  const double d1 = parse_timestamp("2008-03-01T08:00:00Z");
  const double d2 = parse_timestamp("2008-03-02T07:00:00Z");
  const auto split = split_days({rec("A", d1, 0, 0), rec("A", d2, 5, 5), rec("A", d1 + 60, 1, 1)});
  REQUIRE(split.size() == 3);
  // Ordered by time of day: 07:00 (day 2), 08:00, 08:01 (day 1).
  CHECK(split[0].agent_id == "A#2008-03-02");
  CHECK(split[0].timestamp == 7 * 3600.0);
  CHECK(split[1].agent_id == "A#2008-03-01");
  CHECK(split[2].agent_id == "A#2008-03-01");
  CHECK(split[2].x == 1.0);
}

TEST_CASE("clustering") {
  const auto same = cluster_places({rec("a", 0, 2, 2), rec("b", 1, 2, 2), rec("a", 2, 2, 2)}, 5.0);
  REQUIRE(same.size() == 1);
  CHECK(same[0].popularity == 3);

  CHECK(cluster_places({rec("a", 0, 0, 0), rec("a", 1, 20, 0)}, 5.0).size() == 2);
  CHECK_THROWS(cluster_places({}, 0.0));

  SUBCASE("grid with spacing above the radius") {
    std::vector<TraceRecord> t;
    for (int rep = 0; rep < 3; ++rep) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 5; ++j) t.push_back(rec("a", rep, 30.0 * i + rep, 30.0 * j - rep));
      }
    }
    const auto c = cluster_places(t, 10.0);
    CHECK(c.size() == 20);
    for (const auto& x : c) CHECK(x.popularity == 3);
    CHECK(c[7].x == 30.0);
    CHECK(c[7].y == 60.0);
  }
}

TEST_CASE("visit extraction") {
  const std::vector<PlaceCircle> circles{{0, 0, 5, 0}, {100, 0, 5, 0}};
  CHECK(places_of(extract_visits({rec("a", 0, 0, 0), rec("a", 1, 1, 0), rec("a", 2, 0, 1)}, circles)) ==
        std::vector<PlaceId>{0});
  CHECK(places_of(extract_visits({rec("a", 0, 0, 0), rec("a", 1, 100, 0), rec("a", 2, 0, 1)}, circles)) ==
        std::vector<PlaceId>{0, 1, 0});
  CHECK(extract_visits({}, circles).empty());
  CHECK_THROWS(extract_visits({rec("a", 0, 50, 50)}, circles));

  // Duplicates are suppressed per agent, not globally.
  const auto v = extract_visits({rec("a", 0, 0, 0), rec("b", 1, 0, 0), rec("a", 2, 0, 0)}, circles);
  CHECK(v.size() == 2);
}

TEST_CASE("top places") {
  VisitSequence v;
  auto add = [&](PlaceId p) { v.push_back({"g" + std::to_string(v.size()), p, static_cast<double>(v.size())}); };
  // Place 7: 1 visit, place 3: 10 visits, place 5: 5 visits; one agent per visit.
  add(7);
  for (int i = 0; i < 10; ++i) add(3);
  for (int i = 0; i < 5; ++i) add(5);

  const auto all = top_places(v, 5);
  CHECK(all.fewer_than_k);
  CHECK(all.original_id == std::vector<PlaceId>{3, 5, 7});
  CHECK(all.visits.size() == v.size());

  const auto two = top_places(v, 2);
  CHECK_FALSE(two.fewer_than_k);
  CHECK(two.original_id == std::vector<PlaceId>{3, 5});
  CHECK(two.counts == std::vector<std::int64_t>{10, 5});
  std::set<PlaceId> used;
  for (const auto& x : two.visits) used.insert(x.place);
  CHECK(used == std::set<PlaceId>{0, 1});

  const auto one = top_places(v, 1);
  for (const auto& x : one.visits) CHECK(x.place == 0);
  CHECK_THROWS(top_places(v, 0));

  SUBCASE("ties follow first appearance") {
    VisitSequence t{{"a", 4, 0}, {"b", 2, 1}, {"c", 9, 2}};
    CHECK(top_places(t, 2).original_id == std::vector<PlaceId>{4, 2});
  }
  SUBCASE("filtering merges newly adjacent repeats") {
    VisitSequence t{{"a", 0, 0}, {"a", 1, 1}, {"a", 0, 2}, {"b", 0, 3}, {"b", 0, 4}};
    t.push_back({"c", 1, 5});
    t.push_back({"c", 0, 6});
    t.push_back({"d", 0, 7});
    const auto r = top_places(t, 1);
    CHECK(r.visits.size() == 4);
  }
}

TEST_CASE("sample fixture: clustering, visits and top-K") {
  auto records = split_days(load_trace(THROWBOX_DATA_DIR "/sample_trace.csv"));
  REQUIRE(records.size() == 10);
  const auto circles = cluster_places(records, 10.0);
  REQUIRE(circles.size() == 4);
  CHECK(circles[0].popularity == 6);
  CHECK(circles[1].popularity == 2);
  CHECK(circles[2].x == 500.0);
  CHECK(circles[3].y == 100.0);
  const auto visits = extract_visits(records, circles);
  CHECK(places_of(visits) == std::vector<PlaceId>{0, 0, 1, 1, 2, 3, 0, 0, 0});
  CHECK(visits[1].agent_id == "u1#2008-03-02");
  const auto top = top_places(visits, 2);
  CHECK(top.original_id == std::vector<PlaceId>{0, 1});
  CHECK(places_of(top.visits) == std::vector<PlaceId>{0, 0, 1, 1, 0, 0});
  CHECK(top_places(visits, 3).original_id == std::vector<PlaceId>{0, 1, 2});
}

TEST_CASE("replay") {
  VisitSequence v{{"a", 0, 0}, {"b", 1, 1}, {"a", 2, 2}, {"b", 0, 3}, {"c", 3, 4}, {"b", 3, 5}, {"c", 4, 6}};
  RngStream rng(1);
  SUBCASE("p = 0 follows the transfer rule") {
    const auto s = replay(v, 5, 0.0, 1, rng);
    CHECK(s.size() == v.size() + 1);
    // a drops at 0 and 2; b picks up at 0 and drops at 3; c reaches 3 before b.
    CHECK(s.place_coverage.back() == 3);
    CHECK(s.agent_coverage.back() == 2);
  }
  SUBCASE("p = 1 leaves only the initiator's drops") {
    const auto s = replay(v, 5, 1.0, 1, rng);
    CHECK(s.place_coverage.back() == 2);
    CHECK(s.agent_coverage.back() == 1);
  }
  SUBCASE("measurement interval") {
    const auto s = replay(v, 5, 0.0, 3, rng);
    CHECK(s.times == std::vector<std::int64_t>{0, 3, 6});
  }
  CHECK_THROWS(replay(v, 5, 0.1, 0, rng));
  CHECK_THROWS(replay(v, 3, 0.1, 1, rng));
}

TEST_CASE("replay on a round-robin trace stabilizes") {
  VisitSequence v;
  const char* agents[] = {"a", "b", "c"};
  for (int step = 0; step < 600; ++step) {
    for (int j = 0; j < 3; ++j) v.push_back({agents[j], (step + 2 * j) % 5, static_cast<double>(3 * step + j)});
  }
  const auto r = replay_ensemble(v, 5, 0.1, 3, 300, 1);
  const std::size_t begin = r.place_mean.size() * 3 / 4;
  const std::vector<double> tail(r.place_mean.begin() + static_cast<long>(begin), r.place_mean.end());
  CHECK(coefficient_of_variation(tail) < 0.05);
}
