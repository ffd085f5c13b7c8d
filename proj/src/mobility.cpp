#include "throwbox/mobility.hpp"

#include <algorithm>
#include <stdexcept>

namespace throwbox {

namespace {

Eigen::VectorXd checked_weights(const CountVector& counts, const MobilityParams& params) {
  if (counts.size() == 0) throw std::invalid_argument("selection: no places");
  if ((counts.array() < 0).any()) throw std::invalid_argument("selection: negative visit count");
  if (params.randomness < 0.0 || params.clustering_exp < 0.0) {
    throw std::invalid_argument("selection: randomness and clustering exponent must be >= 0");
  }
  Eigen::VectorXd w = selection_weights(counts, params);
  if (!(w.sum() > 0.0)) {
    throw std::invalid_argument("selection: all weights are zero (invalid initial condition)");
  }
  return w;
}

}  // namespace

Eigen::VectorXd selection_probabilities(const CountVector& counts, const MobilityParams& params) {
  const Eigen::VectorXd w = checked_weights(counts, params);
  return w / w.sum();
}

std::vector<PlaceId> sample_distinct_places(const CountVector& counts, const MobilityParams& params, int k,
                                            RngStream& rng) {
  if (k < 0 || k > counts.size()) throw std::invalid_argument("sample_distinct_places: k exceeds number of places");
  Eigen::VectorXd w = checked_weights(counts, params);
  std::vector<PlaceId> out;
  out.reserve(static_cast<std::size_t>(k));
  double total = w.sum();
  for (int draw = 0; draw < k; ++draw) {
    if (!(total > 0.0)) {
      // Only zero-weight places remain (possible when randomness = 0 and some
      // counts are 0); they are drawn uniformly.
      w = (w.array() == 0.0).select(Eigen::VectorXd::Ones(w.size()), 0.0);
      for (PlaceId chosen : out) w[chosen] = 0.0;
      total = w.sum();
    }
    const auto idx = static_cast<PlaceId>(rng.categorical({w.data(), static_cast<std::size_t>(w.size())}, total));
    out.push_back(idx);
    total -= w[idx];
    w[idx] = 0.0;
    // Guard against drift from repeated subtraction.
    if (total < 1e-9 * w.size()) total = w.sum();
  }
  return out;
}

std::vector<PlaceId> sample_places_with_replacement(const CountVector& counts, const MobilityParams& params,
                                                    int k, RngStream& rng) {
  if (k < 0) throw std::invalid_argument("sample_places_with_replacement: negative k");
  const Eigen::VectorXd w = checked_weights(counts, params);
  // Cumulative table so each draw is a binary search.
  std::vector<double> cumulative(static_cast<std::size_t>(w.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) cumulative[static_cast<std::size_t>(i)] = (acc += w[i]);
  std::vector<PlaceId> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int draw = 0; draw < k; ++draw) {
    const double target = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    auto idx = static_cast<PlaceId>(it - cumulative.begin());
    while (w[idx] <= 0.0) --idx;  // target landed on a flat (zero-weight) step edge
    out.push_back(idx);
  }
  return out;
}

PlaceId sample_place(const CountVector& counts, const MobilityParams& params, const std::vector<bool>* excluded,
                     RngStream& rng) {
  Eigen::VectorXd w = checked_weights(counts, params);
  if (excluded != nullptr) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if ((*excluded)[static_cast<std::size_t>(i)]) w[i] = 0.0;
    }
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw std::invalid_argument("sample_place: no selectable place left");
  return static_cast<PlaceId>(rng.categorical({w.data(), static_cast<std::size_t>(w.size())}, total));
}

std::vector<PlaceId> sample_places(const CountVector& counts, const MobilityParams& params, int k,
                                   ConnectionMode mode, RngStream& rng) {
  return mode == ConnectionMode::distinct ? sample_distinct_places(counts, params, k, rng)
                                          : sample_places_with_replacement(counts, params, k, rng);
}

}  // namespace throwbox
