#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "throwbox/mobility.hpp"
#include "throwbox/model.hpp"
#include "throwbox/rng.hpp"

namespace throwbox {

/// Message state of every place plus its cumulative visit count d_i.
class PlaceState {
 public:
  explicit PlaceState(int n_places);

  int n_places() const { return static_cast<int>(visit_counts_.size()); }
  const CountVector& visit_counts() const { return visit_counts_; }
  bool has_message(PlaceId p) const { return has_message_[static_cast<std::size_t>(p)]; }
  bool ever_hosted(PlaceId p) const { return ever_hosted_[static_cast<std::size_t>(p)]; }
  /// Places that received and hosted the message at least once.
  int place_coverage() const { return coverage_; }
  /// Places currently holding the message.
  const std::vector<PlaceId>& holders() const { return holders_; }

  void record_visit(PlaceId p) { ++visit_counts_[p]; }
  void drop(PlaceId p);
  void erase(PlaceId p);
  /// Each holder independently loses the message with probability p.
  int erase_each(double p, RngStream& rng);

 private:
  CountVector visit_counts_;
  std::vector<bool> has_message_;
  std::vector<bool> ever_hosted_;
  std::vector<PlaceId> holders_;
  std::vector<std::int32_t> holder_slot_;
  int coverage_ = 0;
};

struct AgentState {
  AgentId id = 0;
  bool has_message = false;
  std::int64_t places_visited = 0;
};

enum class Direction { none, agent_to_place, place_to_agent };

struct TransferEvent {
  std::int64_t time = 0;
  AgentId agent = 0;
  PlaceId place = 0;
  Direction direction = Direction::none;
};

/// Time-indexed coverage counts. Entry 0 is the state before any visit
/// (the initiator already carries the message).
struct CoverageSeries {
  std::vector<std::int64_t> times;
  std::vector<std::int64_t> place_coverage;
  std::vector<std::int64_t> agent_coverage;

  std::size_t size() const { return times.size(); }
  void push(std::int64_t t, std::int64_t places, std::int64_t agents) {
    times.push_back(t);
    place_coverage.push_back(places);
    agent_coverage.push_back(agents);
  }
};

/// One agent visiting one place: applies the transfer rule and counts the visit.
TransferEvent visit(PlaceState& places, AgentState& agent, PlaceId place, std::int64_t time = 0);

/// Every place holding the message independently loses it with probability p.
/// Returns the number of deletions. ever_hosted is untouched.
int refresh(PlaceState& places, double p, RngStream& rng);

/// Disjoint life spans: agents enter one at a time, make their visits, leave.
/// One time unit per agent.
CoverageSeries run_disjoint(const SimConfig& config, RngStream& rng);

/// Overlapping life spans: one agent enters per time step; each step performs
/// visits_per_step_overlap visits, each by an agent drawn uniformly from the
/// agents that have entered and not yet used up their visit budget.
CoverageSeries run_overlapping(const SimConfig& config, RngStream& rng);

/// Dispatches on config.lifespan_mode.
CoverageSeries run_single(const SimConfig& config, RngStream& rng);

/// Earliest time at which agent coverage reaches fraction * n_agents.
std::optional<std::int64_t> time_to_agent_coverage(const CoverageSeries& series, double fraction, int n_agents);

/// Mean of the place-coverage series over its final quarter.
double stabilized_coverage(const CoverageSeries& series);

struct EnsembleResult {
  std::vector<std::int64_t> times;
  std::vector<double> place_mean, place_sem;
  std::vector<double> agent_mean, agent_sem;
  std::vector<std::int64_t> final_place_coverage;  // per run
  std::vector<double> stabilized;                  // per run
  /// Per-run series, kept only when requested.
  std::vector<CoverageSeries> runs;

  double stabilized_mean() const;
  double stabilized_sem() const;
};

struct EnsembleOptions {
  int parallelism = 1;
  bool keep_runs = false;
};

/// config.runs independent runs; run r is seeded with config.seed + r.
/// Aggregation is in run order, so results do not depend on parallelism.
EnsembleResult ensemble(const SimConfig& config, const EnsembleOptions& options = {});

/// Pointwise mean and standard error of equal-length series.
EnsembleResult aggregate(std::vector<CoverageSeries> runs, bool keep_runs);

// ---------------------------------------------------------------------------
// Scripted schedules (deterministic replays)

struct ScriptedStep {
  std::vector<std::pair<AgentId, PlaceId>> visits;  // executed in order
  std::vector<PlaceId> deletions;                   // applied at the end of the step
};

struct ScriptedSchedule {
  int n_places = 0;
  std::vector<std::string> agent_labels;  // index = AgentId; agent 0 is the initiator
  std::vector<ScriptedStep> steps;
};

/// Text format, one directive per line (`#` starts a comment):
///   places N
///   visit STEP AGENT PLACE     (PLACE is 1-based)
///   delete STEP PLACE          (refresh deletion at the end of STEP)
/// Steps are 1-based and must appear in non-decreasing order. Agents are
/// labels; the first label seen is the initiator.
ScriptedSchedule parse_schedule(const std::string& text);

/// Series entry s is the state after step s (entry 0: before step 1).
CoverageSeries run_scripted(const ScriptedSchedule& schedule, std::vector<TransferEvent>* events = nullptr);

/// The five-place, three-agent walkthrough used in the documentation.
const std::string& walkthrough_schedule_text();

}  // namespace throwbox
