#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "throwbox/mobility.hpp"
#include "throwbox/model.hpp"
#include "throwbox/rng.hpp"

namespace throwbox {

/// Fixed place partition plus a growing agent partition.
struct BipartiteGraph {
  int n_places = 0;
  /// Places each agent connected to. In multiset mode a place may repeat
  /// (parallel edges through the same agent).
  std::vector<std::vector<PlaceId>> agent_connections;
  /// 1 (initial degree) + number of agent edges ending at the place.
  CountVector place_degrees;

  explicit BipartiteGraph(int n = 0) : n_places(n), place_degrees(initial_counts(n > 0 ? n : 0)) {}
  std::int64_t n_agents() const { return static_cast<std::int64_t>(agent_connections.size()); }
  void add_agent(std::vector<PlaceId> places);
};

using WeightMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using Adjacency = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct ThresholdedProjection {
  Adjacency adjacency;  // symmetric, false diagonal
  double threshold_v = 0.0;
  std::int64_t t_agents = 1;

  int n_places() const { return static_cast<int>(adjacency.rows()); }
};

struct ComponentSummary {
  int count = 0;                // C_v, singletons included
  int largest = 0;              // G_b
  std::vector<int> sizes;       // descending
  std::vector<int> label;       // component index per place
  int largest_label = 0;
};

struct DirichletGrowth {
  BipartiteGraph graph;
  Eigen::VectorXd theta;
};

/// Preferential growth: T agents join one after another. Each draws its
/// connection count from dist and picks places by the selection rule; place
/// degrees (the d_i of the rule) are updated once the agent is complete.
BipartiteGraph grow_preferential(int n_places, const VisitDistribution& dist, std::int64_t t_agents,
                                 const MobilityParams& params, RngStream& rng,
                                 ConnectionMode mode = ConnectionMode::multiset);

/// Two-step equivalent: theta ~ Dirichlet(1, ..., 1), then every agent picks
/// its places from theta.
DirichletGrowth grow_dirichlet(int n_places, const VisitDistribution& dist, std::int64_t t_agents, RngStream& rng,
                               ConnectionMode mode = ConnectionMode::multiset);

/// Adds one agent's pairwise co-visit counts to W. Every pair of connection
/// slots on different places contributes 1, so a place listed n_i times and
/// another listed n_j times gain n_i * n_j.
void accumulate_projection(WeightMatrix& weights, const std::vector<PlaceId>& connections);

/// Full recomputation of the one-mode projection.
WeightMatrix project(const BipartiteGraph& graph);

/// Keeps edge (i, j) iff W(i, j) >= v * t.
ThresholdedProjection threshold(const WeightMatrix& weights, double v, std::int64_t t);

ComponentSummary components(const ThresholdedProjection& tp);

/// C_v + G_b == N + 1: one non-trivial component (or none) plus singletons.
bool theorem_holds(const ComponentSummary& summary, int n_places);
bool theorem_holds(const ThresholdedProjection& tp);

/// Node degrees of the thresholded projection.
Eigen::VectorXi degrees(const ThresholdedProjection& tp);

struct GbSample {
  std::int64_t t = 0;
  int largest = 0;
  int count = 0;
};

/// G_b(t) of a preferentially grown BNW with threshold v * t, sampled every
/// `stride` agents and always at t = T.
std::vector<GbSample> gb_timeseries(int n_places, const VisitDistribution& dist, double v, std::int64_t t_agents,
                                    const MobilityParams& params, RngStream& rng,
                                    ConnectionMode mode = ConnectionMode::multiset, std::int64_t stride = 1);

/// "i j w" per line for every i < j with w > 0 (0-based place ids).
void write_projection_edges(std::ostream& out, const WeightMatrix& weights);
/// "i j" per line for every kept edge, i < j.
void write_threshold_edges(std::ostream& out, const ThresholdedProjection& tp);

}  // namespace throwbox
