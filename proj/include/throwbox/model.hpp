#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "throwbox/rng.hpp"

namespace throwbox {

using PlaceId = std::int32_t;
using AgentId = std::int32_t;

/// Per-place integer counters (visit counts, bipartite degrees).
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Distribution of the number of visits (connections) an agent makes.
class VisitDistribution {
 public:
  static VisitDistribution constant(int mu);
  /// `support` values must be positive and distinct; `probabilities` must sum
  /// to 1 within 1e-12.
  static VisitDistribution empirical(std::vector<int> support, std::vector<double> probabilities);
  /// Discrete uniform on the integers [lo, hi].
  static VisitDistribution uniform(int lo, int hi);

  /// Parses "constant:20", "uniform:11:29" or "empirical:1=0.5,3=0.5".
  static VisitDistribution parse(const std::string& text);
  std::string to_string() const;

  bool is_constant() const { return support_.size() == 1; }
  const std::vector<int>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  int max_value() const;
  int min_value() const;

  int sample(RngStream& rng) const;

  friend bool operator==(const VisitDistribution&, const VisitDistribution&) = default;

 private:
  VisitDistribution(std::vector<int> support, std::vector<double> probabilities, std::string label);

  std::vector<int> support_;
  std::vector<double> probabilities_;
  std::string label_;
};

struct Moments {
  double mean = 0.0;           // psi
  double second_moment = 0.0;  // mu_2
  double variance = 0.0;       // sigma^2
};

Moments moments(const VisitDistribution& dist);

/// sigma^2 + psi (psi - 1), i.e. mu_2 - mu. Throws std::domain_error when the
/// value is not positive (the closed-form coverage formulas do not apply: an
/// agent with a single connection creates no projection edge).
double denominator(const VisitDistribution& dist);

enum class LifespanMode { disjoint, overlapping };
enum class RefreshGranularity { visit, step };
/// How an agent's visits/connections are drawn: distinct places (sequential
/// sampling without replacement) or independent draws that may repeat a place.
enum class ConnectionMode { distinct, multiset };

std::string to_string(LifespanMode m);
std::string to_string(RefreshGranularity g);
std::string to_string(ConnectionMode c);
LifespanMode parse_lifespan_mode(const std::string& s);
RefreshGranularity parse_refresh_granularity(const std::string& s);
ConnectionMode parse_connection_mode(const std::string& s);

struct SimConfig {
  int n_places = 100;
  VisitDistribution visits_per_agent = VisitDistribution::constant(20);
  double refresh_prob = 0.05;
  double randomness = 0.0;      // delta
  double clustering_exp = 1.0;  // alpha
  int n_agents = 2000;
  LifespanMode lifespan_mode = LifespanMode::disjoint;
  int visits_per_step_overlap = 20;
  RefreshGranularity refresh_granularity = RefreshGranularity::visit;
  ConnectionMode connection_mode = ConnectionMode::distinct;
  std::uint64_t seed = 1;
  int runs = 1;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Ordered `key = value` rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimConfig& config);
/// Parses `key = value` lines; blank lines and `#` comments are ignored.
/// Unknown keys and malformed values throw std::invalid_argument.
SimConfig parse_config(const std::string& text, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});
/// Applies a single key. Throws on unknown key.
void set_config_value(SimConfig& config, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();
/// Overrides any key present in the environment as PREFIX + upper-cased key
/// (e.g. THROWBOX_REFRESH_PROB). Returns the keys that were overridden.
std::vector<std::string> apply_env_overrides(SimConfig& config, const std::string& prefix = "THROWBOX_");

}  // namespace throwbox
