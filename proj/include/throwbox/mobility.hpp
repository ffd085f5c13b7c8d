#pragma once

#include <vector>

#include <Eigen/Dense>

#include "throwbox/model.hpp"
#include "throwbox/rng.hpp"

namespace throwbox {

/// Preference parameters of the place-selection rule
///   Prob(P_i) = (d_i + randomness)^clustering_exp / sum_j (d_j + randomness)^clustering_exp.
/// (randomness = 0, clustering_exp = 1) is the pure preferential baseline.
struct MobilityParams {
  double randomness = 0.0;
  double clustering_exp = 1.0;
};

/// Unnormalized selection weights (d_i + randomness)^clustering_exp.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> selection_weights(const CountVector& counts, const MobilityParams& params) {
  const auto shifted = counts.template cast<Scalar>().array() + static_cast<Scalar>(params.randomness);
  if (params.clustering_exp == 1.0) return shifted.matrix();
  if (params.clustering_exp == 0.0) {
    return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(counts.size());
  }
  return shifted.pow(static_cast<Scalar>(params.clustering_exp)).matrix();
}

/// Normalized selection probabilities. Throws std::invalid_argument when any
/// count is negative or every weight is zero (randomness = 0 with all counts 0).
Eigen::VectorXd selection_probabilities(const CountVector& counts, const MobilityParams& params);

/// Draws k distinct places one after another, renormalizing over the places
/// not yet drawn. Counts are held fixed across the k draws. Throws
/// std::invalid_argument when k exceeds the number of places.
std::vector<PlaceId> sample_distinct_places(const CountVector& counts, const MobilityParams& params, int k,
                                            RngStream& rng);

/// Draws k places independently from the same selection probabilities; a
/// place may repeat.
std::vector<PlaceId> sample_places_with_replacement(const CountVector& counts, const MobilityParams& params,
                                                    int k, RngStream& rng);

/// Single draw from the selection probabilities, skipping places flagged in
/// `excluded` (may be null). Throws when every remaining weight is zero.
PlaceId sample_place(const CountVector& counts, const MobilityParams& params, const std::vector<bool>* excluded,
                     RngStream& rng);

std::vector<PlaceId> sample_places(const CountVector& counts, const MobilityParams& params, int k,
                                   ConnectionMode mode, RngStream& rng);

/// Initial visit counts: every place starts at 1.
inline CountVector initial_counts(int n_places) { return CountVector::Ones(n_places); }

}  // namespace throwbox
