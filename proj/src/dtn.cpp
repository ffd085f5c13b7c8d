#include "throwbox/dtn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace throwbox {

// ---------------------------------------------------------------------------
// PlaceState

PlaceState::PlaceState(int n_places)
    : visit_counts_(initial_counts(n_places)),
      has_message_(static_cast<std::size_t>(n_places), false),
      ever_hosted_(static_cast<std::size_t>(n_places), false),
      holder_slot_(static_cast<std::size_t>(n_places), -1) {
  if (n_places <= 0) throw std::invalid_argument("PlaceState: n_places must be positive");
}

void PlaceState::drop(PlaceId p) {
  const auto i = static_cast<std::size_t>(p);
  if (has_message_[i]) return;
  has_message_[i] = true;
  holder_slot_[i] = static_cast<std::int32_t>(holders_.size());
  holders_.push_back(p);
  if (!ever_hosted_[i]) {
    ever_hosted_[i] = true;
    ++coverage_;
  }
}

void PlaceState::erase(PlaceId p) {
  const auto i = static_cast<std::size_t>(p);
  if (!has_message_[i]) return;
  has_message_[i] = false;
  const auto slot = static_cast<std::size_t>(holder_slot_[i]);
  const PlaceId moved = holders_.back();
  holders_[slot] = moved;
  holder_slot_[static_cast<std::size_t>(moved)] = static_cast<std::int32_t>(slot);
  holders_.pop_back();
  holder_slot_[i] = -1;
}

int PlaceState::erase_each(double p, RngStream& rng) {
  int removed = 0;
  // Back to front: erase() fills slot i with an already-visited tail entry.
  for (std::size_t i = holders_.size(); i-- > 0;) {
    if (rng.bernoulli(p)) {
      erase(holders_[i]);
      ++removed;
    }
  }
  return removed;
}

// ---------------------------------------------------------------------------
// protocol

TransferEvent visit(PlaceState& places, AgentState& agent, PlaceId place, std::int64_t time) {
  if (place < 0 || place >= places.n_places()) throw std::out_of_range("visit: place id out of range");
  TransferEvent ev{time, agent.id, place, Direction::none};
  const bool place_has = places.has_message(place);
  if (agent.has_message && !place_has) {
    places.drop(place);
    ev.direction = Direction::agent_to_place;
  } else if (place_has && !agent.has_message) {
    agent.has_message = true;
    ev.direction = Direction::place_to_agent;
  }
  places.record_visit(place);
  ++agent.places_visited;
  return ev;
}

int refresh(PlaceState& places, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("refresh: p must lie in [0, 1]");
  if (p == 0.0) return 0;
  return places.erase_each(p, rng);
}

namespace {

MobilityParams mobility_of(const SimConfig& c) { return {c.randomness, c.clustering_exp}; }

void fill_frozen(CoverageSeries& s, std::int64_t from, std::int64_t until) {
  const auto places = s.place_coverage.back();
  const auto agents = s.agent_coverage.back();
  for (std::int64_t t = from; t <= until; ++t) s.push(t, places, agents);
}

}  // namespace

CoverageSeries run_disjoint(const SimConfig& config, RngStream& rng) {
  config.validate();
  const bool per_visit = config.refresh_granularity == RefreshGranularity::visit;
  const MobilityParams mobility = mobility_of(config);
  PlaceState places(config.n_places);
  CoverageSeries series;
  std::int64_t agents_covered = 1;
  series.push(0, 0, agents_covered);

  for (AgentId a = 0; a < config.n_agents; ++a) {
    const std::int64_t t = a + 1;
    AgentState agent{a, a == 0, 0};
    const int k = config.visits_per_agent.sample(rng);
    const auto targets = sample_places(places.visit_counts(), mobility, k, config.connection_mode, rng);
    for (PlaceId place : targets) {
      const auto ev = visit(places, agent, place, t);
      if (ev.direction == Direction::place_to_agent) ++agents_covered;
      if (per_visit) refresh(places, config.refresh_prob, rng);
    }
    if (!per_visit) refresh(places, config.refresh_prob, rng);
    series.push(t, places.place_coverage(), agents_covered);

    // Absorbing: no place holds the message and the next agent cannot carry it.
    if (places.holders().empty()) {
      fill_frozen(series, t + 1, config.n_agents);
      break;
    }
  }
  return series;
}

CoverageSeries run_overlapping(const SimConfig& config, RngStream& rng) {
  config.validate();
  const bool per_visit = config.refresh_granularity == RefreshGranularity::visit;
  const bool distinct = config.connection_mode == ConnectionMode::distinct;
  const MobilityParams mobility = mobility_of(config);
  const int horizon = config.n_agents;

  struct Active {
    AgentState state;
    int remaining = 0;
    std::vector<bool> visited;
  };

  PlaceState places(config.n_places);
  CoverageSeries series;
  std::int64_t agents_covered = 1;
  series.push(0, 0, agents_covered);
  std::vector<Active> active;
  int entered = 0;
  int active_carriers = 0;

  for (int step = 0; step < horizon; ++step) {
    const std::int64_t t = step + 1;
    if (entered < config.n_agents) {
      Active a;
      a.state = AgentState{entered, entered == 0, 0};
      a.remaining = config.visits_per_agent.sample(rng);
      if (distinct) a.visited.assign(static_cast<std::size_t>(config.n_places), false);
      if (a.state.has_message) ++active_carriers;
      active.push_back(std::move(a));
      ++entered;
    }
    for (int v = 0; v < config.visits_per_step_overlap && !active.empty(); ++v) {
      const auto slot = static_cast<std::size_t>(rng.uniform_index(active.size()));
      Active& a = active[slot];
      const PlaceId place = sample_place(places.visit_counts(), mobility, distinct ? &a.visited : nullptr, rng);
      if (distinct) a.visited[static_cast<std::size_t>(place)] = true;
      const auto ev = visit(places, a.state, place, t);
      if (ev.direction == Direction::place_to_agent) {
        ++agents_covered;
        ++active_carriers;
      }
      if (--a.remaining == 0) {
        if (a.state.has_message) --active_carriers;
        active[slot] = std::move(active.back());
        active.pop_back();
      }
      if (per_visit) refresh(places, config.refresh_prob, rng);
    }
    if (!per_visit) refresh(places, config.refresh_prob, rng);
    series.push(t, places.place_coverage(), agents_covered);

    if (places.holders().empty() && active_carriers == 0) {
      fill_frozen(series, t + 1, horizon);
      break;
    }
  }
  return series;
}

CoverageSeries run_single(const SimConfig& config, RngStream& rng) {
  return config.lifespan_mode == LifespanMode::disjoint ? run_disjoint(config, rng) : run_overlapping(config, rng);
}

std::optional<std::int64_t> time_to_agent_coverage(const CoverageSeries& series, double fraction, int n_agents) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("time_to_agent_coverage: fraction in (0, 1]");
  const double target = fraction * n_agents;
  for (std::size_t i = 0; i < series.size(); ++i) {
    // Small slack so that e.g. 0.9 * 1000 compares equal to 900.
    if (static_cast<double>(series.agent_coverage[i]) >= target - 1e-9) return series.times[i];
  }
  return std::nullopt;
}

namespace {

std::size_t tail_begin(std::size_t size) {
  // Entry 0 is the pre-visit state; the quarter is taken over time units 1..T.
  const std::size_t units = size > 0 ? size - 1 : 0;
  const std::size_t quarter = std::max<std::size_t>(1, units / 4);
  return size - std::min(quarter, size);
}

}  // namespace

double stabilized_coverage(const CoverageSeries& series) {
  if (series.size() == 0) throw std::invalid_argument("stabilized_coverage: empty series");
  const std::size_t begin = tail_begin(series.size());
  double sum = 0.0;
  for (std::size_t i = begin; i < series.size(); ++i) sum += static_cast<double>(series.place_coverage[i]);
  return sum / static_cast<double>(series.size() - begin);
}

double EnsembleResult::stabilized_mean() const {
  double s = 0.0;
  for (double x : stabilized) s += x;
  return stabilized.empty() ? 0.0 : s / static_cast<double>(stabilized.size());
}

double EnsembleResult::stabilized_sem() const {
  const auto n = static_cast<double>(stabilized.size());
  if (n < 2) return 0.0;
  const double m = stabilized_mean();
  double ss = 0.0;
  for (double x : stabilized) ss += (x - m) * (x - m);
  return std::sqrt(ss / (n - 1.0) / n);
}

EnsembleResult aggregate(std::vector<CoverageSeries> runs, bool keep_runs) {
  if (runs.empty()) throw std::invalid_argument("aggregate: no runs");
  const std::size_t len = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != len) throw std::invalid_argument("aggregate: series lengths differ");
  }
  const auto n = static_cast<double>(runs.size());
  EnsembleResult out;
  out.times = runs.front().times;
  out.place_mean.assign(len, 0.0);
  out.agent_mean.assign(len, 0.0);
  out.place_sem.assign(len, 0.0);
  out.agent_sem.assign(len, 0.0);
  for (const auto& r : runs) {
    for (std::size_t i = 0; i < len; ++i) {
      out.place_mean[i] += static_cast<double>(r.place_coverage[i]);
      out.agent_mean[i] += static_cast<double>(r.agent_coverage[i]);
    }
    out.final_place_coverage.push_back(r.place_coverage.back());
    out.stabilized.push_back(stabilized_coverage(r));
  }
  for (std::size_t i = 0; i < len; ++i) {
    out.place_mean[i] /= n;
    out.agent_mean[i] /= n;
  }
  if (runs.size() > 1) {
    for (const auto& r : runs) {
      for (std::size_t i = 0; i < len; ++i) {
        const double dp = static_cast<double>(r.place_coverage[i]) - out.place_mean[i];
        const double da = static_cast<double>(r.agent_coverage[i]) - out.agent_mean[i];
        out.place_sem[i] += dp * dp;
        out.agent_sem[i] += da * da;
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      out.place_sem[i] = std::sqrt(out.place_sem[i] / (n - 1.0) / n);
      out.agent_sem[i] = std::sqrt(out.agent_sem[i] / (n - 1.0) / n);
    }
  }
  if (keep_runs) out.runs = std::move(runs);
  return out;
}

EnsembleResult ensemble(const SimConfig& config, const EnsembleOptions& options) {
  config.validate();
  const auto n_runs = static_cast<std::size_t>(config.runs);
  std::vector<CoverageSeries> runs(n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < n_runs; r = next++) {
      RngStream rng(run_seed(config.seed, r));
      runs[r] = run_single(config, rng);
    }
  };
  const int threads = std::max(1, std::min<int>(options.parallelism, config.runs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return aggregate(std::move(runs), options.keep_runs);
}

// ---------------------------------------------------------------------------
// scripted schedules

ScriptedSchedule parse_schedule(const std::string& text) {
  ScriptedSchedule sched;
  std::unordered_map<std::string, AgentId> agent_index;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int last_step = 0;
  auto step_ref = [&](int step) -> ScriptedStep& {
    if (step < 1) throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": steps are 1-based");
    if (step < last_step) {
      throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": steps must not decrease");
    }
    last_step = step;
    if (sched.steps.size() < static_cast<std::size_t>(step)) sched.steps.resize(static_cast<std::size_t>(step));
    return sched.steps[static_cast<std::size_t>(step - 1)];
  };
  auto place_ref = [&](int place) -> PlaceId {
    if (sched.n_places <= 0) {
      throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": 'places N' must come first");
    }
    if (place < 1 || place > sched.n_places) {
      throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": place out of range");
    }
    return place - 1;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string directive;
    if (!(fields >> directive)) continue;
    if (directive == "places") {
      if (!(fields >> sched.n_places) || sched.n_places <= 0) {
        throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": bad place count");
      }
    } else if (directive == "visit") {
      int step = 0, place = 0;
      std::string agent;
      if (!(fields >> step >> agent >> place)) {
        throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": expected visit STEP AGENT PLACE");
      }
      auto [it, inserted] = agent_index.try_emplace(agent, static_cast<AgentId>(sched.agent_labels.size()));
      if (inserted) sched.agent_labels.push_back(agent);
      step_ref(step).visits.emplace_back(it->second, place_ref(place));
    } else if (directive == "delete") {
      int step = 0, place = 0;
      if (!(fields >> step >> place)) {
        throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": expected delete STEP PLACE");
      }
      step_ref(step).deletions.push_back(place_ref(place));
    } else {
      throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": unknown directive '" + directive +
                                  "'");
    }
  }
  if (sched.n_places <= 0) throw std::invalid_argument("schedule: missing 'places N'");
  return sched;
}

CoverageSeries run_scripted(const ScriptedSchedule& schedule, std::vector<TransferEvent>* events) {
  PlaceState places(schedule.n_places);
  std::vector<AgentState> agents(schedule.agent_labels.size());
  for (std::size_t i = 0; i < agents.size(); ++i) agents[i].id = static_cast<AgentId>(i);
  if (!agents.empty()) agents.front().has_message = true;
  auto agent_coverage = [&] {
    return static_cast<std::int64_t>(std::count_if(agents.begin(), agents.end(), [](const AgentState& a) {
      return a.has_message;
    }));
  };
  CoverageSeries series;
  series.push(0, 0, agent_coverage());
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    const auto t = static_cast<std::int64_t>(s + 1);
    for (const auto& [agent, place] : schedule.steps[s].visits) {
      const auto ev = visit(places, agents[static_cast<std::size_t>(agent)], place, t);
      if (events) events->push_back(ev);
    }
    for (PlaceId p : schedule.steps[s].deletions) places.erase(p);
    series.push(t, places.place_coverage(), agent_coverage());
  }
  return series;
}

const std::string& walkthrough_schedule_text() {
  static const std::string text = R"(# Five places, three agents; A carries the message from the start.
# Each agent makes one visit per step; deletions are the refresh outcomes
# at the end of the step.
places 5
visit 1 A 1
visit 1 B 2
visit 1 C 3
visit 2 A 2
visit 2 B 3
visit 2 C 4
delete 2 1
visit 3 A 2
visit 3 B 4
visit 3 C 5
visit 4 B 2
visit 4 A 1
visit 4 C 4
delete 4 1
delete 4 2
visit 5 B 1
visit 5 A 2
visit 5 C 5
visit 6 C 1
visit 6 B 3
visit 6 A 2
)";
  return text;
}

}  // namespace throwbox
