#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace throwbox {

/// Seeded pseudo-random stream used by every stochastic routine.
///
/// All derived variates (uniform reals, categorical draws, Gamma/Beta/Dirichlet)
/// are computed here from the raw 64-bit engine output rather than through the
/// standard library distribution objects, whose algorithms are
/// implementation-defined. Identical seed and identical call sequence therefore
/// give bit-identical results on every conforming platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to take the log of.
  double uniform_open_left() { return 1.0 - uniform(); }

  /// Uniform integer on [0, n). Unbiased (rejection on the top bucket).
  std::uint64_t uniform_index(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn proportionally to the non-negative `weights`. `total` must be
  /// their sum and strictly positive.
  std::size_t categorical(std::span<const double> weights, double total);
  std::size_t categorical(std::span<const double> weights);

  double exponential() { return -std::log(uniform_open_left()); }
  double standard_normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang, with the shape < 1 boost.
  double gamma(double shape);
  double beta(double a, double b);
  /// Dirichlet(alpha, ..., alpha) over `n` components.
  Eigen::VectorXd symmetric_dirichlet(Eigen::Index n, double alpha);

 private:
  std::mt19937_64 engine_;
};

/// Seed for ensemble member `run`: base seed plus run index.
constexpr std::uint64_t run_seed(std::uint64_t base, std::uint64_t run) { return base + run; }

}  // namespace throwbox
