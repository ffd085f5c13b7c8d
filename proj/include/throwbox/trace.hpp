#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "throwbox/dtn.hpp"
#include "throwbox/model.hpp"
#include "throwbox/rng.hpp"

namespace throwbox {

struct TraceRecord {
  std::string agent_id;
  double timestamp = 0.0;  // seconds since the Unix epoch (UTC)
  double x = 0.0;          // planar metres
  double y = 0.0;
};

struct PlaceCircle {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;
  std::int64_t popularity = 0;  // trace points assigned to the circle
};

struct Visit {
  std::string agent_id;
  PlaceId place = 0;
  double timestamp = 0.0;
};

using VisitSequence = std::vector<Visit>;

/// Seconds since the epoch from "2008-03-01T08:30:00Z", "2008-03-01 08:30:00",
/// an optional fractional part and "+hh:mm" offset, or a plain number.
/// Throws std::invalid_argument on anything else.
double parse_timestamp(const std::string& text);

/// Comma-separated `agent_id,timestamp,x,y` lines. Blank lines and `#`
/// comments are skipped; a first line starting with `agent_id` is a header.
std::vector<TraceRecord> parse_trace(std::istream& in);
std::vector<TraceRecord> load_trace(const std::string& path);

/// Every (agent, calendar day) becomes its own agent "id#YYYY-MM-DD" and all
/// records are moved onto one day (time of day, seconds). The result is
/// ordered by time of day; equal times keep their input order. A trace that
/// lies within a single day is returned unchanged.
std::vector<TraceRecord> split_days(const std::vector<TraceRecord>& trace);

/// Greedy first-fit: in record order, a point joins the first circle whose
/// centre is within `radius`, otherwise it founds a new circle at itself.
std::vector<PlaceCircle> cluster_places(const std::vector<TraceRecord>& trace, double radius);

/// Index of the first circle containing (x, y), or -1.
PlaceId assign_place(const std::vector<PlaceCircle>& circles, double x, double y);

/// Chronological visits (stable on equal timestamps). Consecutive points of
/// one agent inside the same circle form a single visit.
VisitSequence extract_visits(const std::vector<TraceRecord>& trace, const std::vector<PlaceCircle>& circles);

struct TopPlaces {
  VisitSequence visits;              // places renumbered 0..K-1 by rank
  std::vector<PlaceId> original_id;  // rank -> place id before renumbering
  std::vector<std::int64_t> counts;  // rank -> visit count
  bool fewer_than_k = false;
};

/// Keeps visits to the K most visited places (ties: first appearance).
/// Visits that become consecutive duplicates after filtering are merged.
TopPlaces top_places(const VisitSequence& visits, int k);

/// Feeds the visit sequence through the transfer rule. After every
/// `measure_every` visits the place buffers are refreshed and coverage is
/// recorded. The first visiting agent is the initiator.
CoverageSeries replay(const VisitSequence& visits, int n_places, double p, int measure_every, RngStream& rng);

/// `runs` replays, run r seeded with seed + r.
EnsembleResult replay_ensemble(const VisitSequence& visits, int n_places, double p, int measure_every, int runs,
                               std::uint64_t seed);

void write_visits_csv(std::ostream& out, const VisitSequence& visits);

}  // namespace throwbox
