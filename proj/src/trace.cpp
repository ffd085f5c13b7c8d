#include "throwbox/trace.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace throwbox {

namespace {

constexpr double kDay = 86400.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

std::int64_t day_of(double ts) { return static_cast<std::int64_t>(std::floor(ts / kDay)); }

std::string date_string(std::int64_t day) {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{day}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace

double parse_timestamp(const std::string& raw) {
  const std::string text = trim(raw);
  double seconds = 0.0;
  if (parse_number(text, seconds)) return seconds;

  static const std::regex iso(
      R"(^(\d{4})-(\d{2})-(\d{2})[T ](\d{2}):(\d{2}):(\d{2}(?:\.\d+)?)(Z|[+-]\d{2}:?\d{2})?$)");
  std::smatch m;
  if (!std::regex_match(text, m, iso)) throw std::invalid_argument("unparseable timestamp '" + text + "'");
  using namespace std::chrono;
  const year_month_day ymd{year{std::stoi(m[1])}, month{static_cast<unsigned>(std::stoi(m[2]))},
                           day{static_cast<unsigned>(std::stoi(m[3]))}};
  if (!ymd.ok()) throw std::invalid_argument("invalid calendar date in '" + text + "'");
  const int hh = std::stoi(m[4]);
  const int mm = std::stoi(m[5]);
  const double ss = std::stod(m[6]);
  if (hh > 23 || mm > 59 || ss >= 61.0) throw std::invalid_argument("invalid time of day in '" + text + "'");
  double offset = 0.0;
  if (m[7].matched && m[7].str() != "Z") {
    std::string z = m[7].str();
    z.erase(std::remove(z.begin(), z.end(), ':'), z.end());
    const int sign = z[0] == '-' ? -1 : 1;
    offset = sign * (std::stoi(z.substr(1, 2)) * 3600.0 + std::stoi(z.substr(3, 2)) * 60.0);
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<double>(days) * kDay + hh * 3600.0 + mm * 60.0 + ss - offset;
}

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto f = split_fields(t);
    if (out.empty() && !f.empty() && f[0] == "agent_id") continue;
    if (f.size() != 4) throw std::invalid_argument("trace line " + std::to_string(line_no) + ": expected 4 fields");
    TraceRecord r;
    r.agent_id = f[0];
    if (r.agent_id.empty()) throw std::invalid_argument("trace line " + std::to_string(line_no) + ": empty agent id");
    try {
      r.timestamp = parse_timestamp(f[1]);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!parse_number(f[2], r.x) || !parse_number(f[3], r.y)) {
      throw std::invalid_argument("trace line " + std::to_string(line_no) + ": bad coordinate");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TraceRecord> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path);
  return parse_trace(in);
}

std::vector<TraceRecord> split_days(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) return {};
  const auto [lo, hi] = std::minmax_element(trace.begin(), trace.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  if (day_of(lo->timestamp) == day_of(hi->timestamp)) return trace;

  std::vector<TraceRecord> out;
  out.reserve(trace.size());
  for (const auto& r : trace) {
    const std::int64_t d = day_of(r.timestamp);
    TraceRecord s = r;
    s.agent_id = r.agent_id + "#" + date_string(d);
    s.timestamp = r.timestamp - static_cast<double>(d) * kDay;
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return out;
}

std::vector<PlaceCircle> cluster_places(const std::vector<TraceRecord>& trace, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cluster_places: radius must be positive");
  std::vector<PlaceCircle> circles;
  for (const auto& r : trace) {
    PlaceId hit = assign_place(circles, r.x, r.y);
    if (hit < 0) {
      circles.push_back({r.x, r.y, radius, 0});
      hit = static_cast<PlaceId>(circles.size() - 1);
    }
    ++circles[static_cast<std::size_t>(hit)].popularity;
  }
  return circles;
}

PlaceId assign_place(const std::vector<PlaceCircle>& circles, double x, double y) {
  for (std::size_t i = 0; i < circles.size(); ++i) {
    const auto& c = circles[i];
    if (std::hypot(x - c.x, y - c.y) <= c.radius) return static_cast<PlaceId>(i);
  }
  return -1;
}

VisitSequence extract_visits(const std::vector<TraceRecord>& trace, const std::vector<PlaceCircle>& circles) {
  std::vector<std::size_t> order(trace.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return trace[a].timestamp < trace[b].timestamp; });
  std::unordered_map<std::string, PlaceId> last;
  VisitSequence out;
  for (std::size_t i : order) {
    const auto& r = trace[i];
    const PlaceId p = assign_place(circles, r.x, r.y);
    if (p < 0) throw std::invalid_argument("extract_visits: point of agent " + r.agent_id + " lies in no circle");
    auto [it, inserted] = last.try_emplace(r.agent_id, p);
    if (!inserted && it->second == p) continue;
    it->second = p;
    out.push_back({r.agent_id, p, r.timestamp});
  }
  return out;
}

TopPlaces top_places(const VisitSequence& visits, int k) {
  if (k < 1) throw std::invalid_argument("top_places: K must be >= 1");
  std::map<PlaceId, std::int64_t> count;
  std::vector<PlaceId> first_seen;
  for (const auto& v : visits) {
    if (count[v.place]++ == 0) first_seen.push_back(v.place);
  }
  std::vector<PlaceId> ranked = first_seen;
  std::stable_sort(ranked.begin(), ranked.end(), [&](PlaceId a, PlaceId b) { return count[a] > count[b]; });

  TopPlaces out;
  out.fewer_than_k = static_cast<int>(ranked.size()) < k;
  if (static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
  std::map<PlaceId, PlaceId> rank;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    rank[ranked[i]] = static_cast<PlaceId>(i);
    out.original_id.push_back(ranked[i]);
    out.counts.push_back(count[ranked[i]]);
  }
  std::unordered_map<std::string, PlaceId> last;
  for (const auto& v : visits) {
    const auto it = rank.find(v.place);
    if (it == rank.end()) continue;
    auto [prev, inserted] = last.try_emplace(v.agent_id, it->second);
    if (!inserted && prev->second == it->second) continue;
    prev->second = it->second;
    out.visits.push_back({v.agent_id, it->second, v.timestamp});
  }
  return out;
}

CoverageSeries replay(const VisitSequence& visits, int n_places, double p, int measure_every, RngStream& rng) {
  if (measure_every < 1) throw std::invalid_argument("replay: measurement interval must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("replay: p must lie in [0, 1]");
  PlaceState places(n_places);
  std::unordered_map<std::string, AgentState> agents;
  std::int64_t covered = visits.empty() ? 0 : 1;
  CoverageSeries series;
  series.push(0, 0, covered);
  std::int64_t done = 0;
  for (const auto& v : visits) {
    if (v.place < 0 || v.place >= n_places) throw std::out_of_range("replay: place id out of range");
    auto [it, inserted] = agents.try_emplace(v.agent_id);
    if (inserted) {
      it->second.id = static_cast<AgentId>(agents.size() - 1);
      it->second.has_message = it->second.id == 0;
    }
    if (visit(places, it->second, v.place, done).direction == Direction::place_to_agent) ++covered;
    if (++done % measure_every == 0) {
      refresh(places, p, rng);
      series.push(done, places.place_coverage(), covered);
    }
  }
  return series;
}

EnsembleResult replay_ensemble(const VisitSequence& visits, int n_places, double p, int measure_every, int runs,
                               std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("replay_ensemble: runs must be >= 1");
  std::vector<CoverageSeries> all;
  all.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    RngStream rng(run_seed(seed, static_cast<std::uint64_t>(r)));
    all.push_back(replay(visits, n_places, p, measure_every, rng));
  }
  return aggregate(std::move(all), false);
}

void write_visits_csv(std::ostream& out, const VisitSequence& visits) {
  out << "agent_id,place,timestamp\n";
  for (const auto& v : visits) out << v.agent_id << ',' << v.place << ',' << v.timestamp << '\n';
}

}  // namespace throwbox
