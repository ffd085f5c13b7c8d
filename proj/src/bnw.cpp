#include "throwbox/bnw.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace throwbox {

void BipartiteGraph::add_agent(std::vector<PlaceId> places) {
  for (PlaceId p : places) {
    if (p < 0 || p >= n_places) throw std::out_of_range("BipartiteGraph: place id out of range");
    ++place_degrees[p];
  }
  agent_connections.push_back(std::move(places));
}

namespace {

void check_growth(int n_places, const VisitDistribution& dist, std::int64_t t_agents, ConnectionMode mode) {
  if (n_places <= 0) throw std::invalid_argument("grow: n_places must be positive");
  if (t_agents < 0) throw std::invalid_argument("grow: negative agent count");
  if (mode == ConnectionMode::distinct && dist.max_value() > n_places) {
    throw std::invalid_argument("grow: connection count exceeds number of places");
  }
}

std::vector<PlaceId> draw_from_theta(const Eigen::VectorXd& theta, const std::vector<double>& cumulative, int k,
                                     ConnectionMode mode, RngStream& rng) {
  std::vector<PlaceId> out;
  out.reserve(static_cast<std::size_t>(k));
  if (mode == ConnectionMode::multiset) {
    const double total = cumulative.back();
    for (int i = 0; i < k; ++i) {
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), rng.uniform() * total);
      if (it == cumulative.end()) --it;
      out.push_back(static_cast<PlaceId>(it - cumulative.begin()));
    }
    return out;
  }
  Eigen::VectorXd w = theta;
  double total = w.sum();
  for (int i = 0; i < k; ++i) {
    const auto idx = static_cast<PlaceId>(rng.categorical({w.data(), static_cast<std::size_t>(w.size())}, total));
    out.push_back(idx);
    total -= w[idx];
    w[idx] = 0.0;
    if (total < 1e-12) total = w.sum();
  }
  return out;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    auto& px = parent[static_cast<std::size_t>(x)];
    px = parent[static_cast<std::size_t>(px)];
    x = px;
  }
  return x;
}

}  // namespace

BipartiteGraph grow_preferential(int n_places, const VisitDistribution& dist, std::int64_t t_agents,
                                 const MobilityParams& params, RngStream& rng, ConnectionMode mode) {
  check_growth(n_places, dist, t_agents, mode);
  BipartiteGraph g(n_places);
  g.agent_connections.reserve(static_cast<std::size_t>(t_agents));
  for (std::int64_t a = 0; a < t_agents; ++a) {
    const int k = dist.sample(rng);
    g.add_agent(sample_places(g.place_degrees, params, k, mode, rng));
  }
  return g;
}

DirichletGrowth grow_dirichlet(int n_places, const VisitDistribution& dist, std::int64_t t_agents, RngStream& rng,
                               ConnectionMode mode) {
  check_growth(n_places, dist, t_agents, mode);
  DirichletGrowth out{BipartiteGraph(n_places), rng.symmetric_dirichlet(n_places, 1.0)};
  std::vector<double> cumulative(static_cast<std::size_t>(n_places));
  std::partial_sum(out.theta.begin(), out.theta.end(), cumulative.begin());
  out.graph.agent_connections.reserve(static_cast<std::size_t>(t_agents));
  for (std::int64_t a = 0; a < t_agents; ++a) {
    const int k = dist.sample(rng);
    out.graph.add_agent(draw_from_theta(out.theta, cumulative, k, mode, rng));
  }
  return out;
}

void accumulate_projection(WeightMatrix& weights, const std::vector<PlaceId>& connections) {
  for (std::size_t a = 0; a < connections.size(); ++a) {
    for (std::size_t b = a + 1; b < connections.size(); ++b) {
      const PlaceId i = connections[a], j = connections[b];
      if (i == j) continue;
      ++weights(i, j);
      ++weights(j, i);
    }
  }
}

WeightMatrix project(const BipartiteGraph& graph) {
  WeightMatrix w = WeightMatrix::Zero(graph.n_places, graph.n_places);
  for (const auto& s : graph.agent_connections) accumulate_projection(w, s);
  return w;
}

ThresholdedProjection threshold(const WeightMatrix& weights, double v, std::int64_t t) {
  if (v < 0.0) throw std::invalid_argument("threshold: v must be >= 0");
  if (t < 1) throw std::invalid_argument("threshold: t must be >= 1");
  const double cut = v * static_cast<double>(t);
  ThresholdedProjection tp;
  tp.adjacency = weights.cast<double>().array() >= cut;
  tp.adjacency.matrix().diagonal().setConstant(false);
  tp.threshold_v = v;
  tp.t_agents = t;
  return tp;
}

ComponentSummary components(const ThresholdedProjection& tp) {
  const int n = tp.n_places();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      if (!tp.adjacency(i, j)) continue;
      const int ri = find_root(parent, i), rj = find_root(parent, j);
      if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
    }
  }
  ComponentSummary s;
  s.label.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  std::vector<int> sizes;
  for (int i = 0; i < n; ++i) {
    const int r = find_root(parent, i);
    int& l = root_label[static_cast<std::size_t>(r)];
    if (l < 0) {
      l = static_cast<int>(sizes.size());
      sizes.push_back(0);
    }
    s.label[static_cast<std::size_t>(i)] = l;
    ++sizes[static_cast<std::size_t>(l)];
  }
  s.count = static_cast<int>(sizes.size());
  if (!sizes.empty()) {
    const auto it = std::max_element(sizes.begin(), sizes.end());
    s.largest = *it;
    s.largest_label = static_cast<int>(it - sizes.begin());
  }
  s.sizes = sizes;
  std::sort(s.sizes.begin(), s.sizes.end(), std::greater<>());
  return s;
}

bool theorem_holds(const ComponentSummary& summary, int n_places) { return summary.count + summary.largest == n_places + 1; }

bool theorem_holds(const ThresholdedProjection& tp) { return theorem_holds(components(tp), tp.n_places()); }

Eigen::VectorXi degrees(const ThresholdedProjection& tp) { return tp.adjacency.cast<int>().rowwise().sum(); }

std::vector<GbSample> gb_timeseries(int n_places, const VisitDistribution& dist, double v, std::int64_t t_agents,
                                    const MobilityParams& params, RngStream& rng, ConnectionMode mode,
                                    std::int64_t stride) {
  check_growth(n_places, dist, t_agents, mode);
  if (stride < 1) throw std::invalid_argument("gb_timeseries: stride must be >= 1");
  BipartiteGraph g(n_places);
  WeightMatrix w = WeightMatrix::Zero(n_places, n_places);
  std::vector<GbSample> out;
  for (std::int64_t t = 1; t <= t_agents; ++t) {
    const int k = dist.sample(rng);
    auto places = sample_places(g.place_degrees, params, k, mode, rng);
    accumulate_projection(w, places);
    for (PlaceId p : places) ++g.place_degrees[p];
    if (t % stride == 0 || t == t_agents) {
      const auto summary = components(threshold(w, v, t));
      out.push_back({t, summary.largest, summary.count});
    }
  }
  return out;
}

void write_projection_edges(std::ostream& out, const WeightMatrix& weights) {
  for (Eigen::Index i = 0; i < weights.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < weights.cols(); ++j) {
      if (weights(i, j) > 0) out << i << ' ' << j << ' ' << weights(i, j) << '\n';
    }
  }
}

void write_threshold_edges(std::ostream& out, const ThresholdedProjection& tp) {
  for (Eigen::Index i = 0; i < tp.adjacency.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < tp.adjacency.cols(); ++j) {
      if (tp.adjacency(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

}  // namespace throwbox
