#include "throwbox/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace throwbox {

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument(what + ": not an integer: '" + s + "'");
  return value;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument(what + ": not an unsigned integer: '" + s + "'");
  return value;
}

double parse_double(const std::string& s, const std::string& what) {
  if (s.empty()) throw std::invalid_argument(what + ": empty value");
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw std::invalid_argument(what + ": not a number: '" + s + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// VisitDistribution

VisitDistribution::VisitDistribution(std::vector<int> support, std::vector<double> probabilities,
                                     std::string label)
    : support_(std::move(support)), probabilities_(std::move(probabilities)), label_(std::move(label)) {}

VisitDistribution VisitDistribution::constant(int mu) {
  if (mu <= 0) throw std::invalid_argument("visit distribution: constant value must be positive");
  return VisitDistribution({mu}, {1.0}, "constant:" + std::to_string(mu));
}

VisitDistribution VisitDistribution::empirical(std::vector<int> support, std::vector<double> probabilities) {
  if (support.empty() || support.size() != probabilities.size()) {
    throw std::invalid_argument("visit distribution: support and probabilities must be non-empty and equal length");
  }
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() <= 0) throw std::invalid_argument("visit distribution: support must be positive");
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("visit distribution: support values must be distinct");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw std::invalid_argument("visit distribution: probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("visit distribution: probabilities must sum to 1");
  std::string label = "empirical:";
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (i) label += ',';
    label += std::to_string(support[i]) + '=' + format_double(probabilities[i]);
  }
  return VisitDistribution(std::move(support), std::move(probabilities), std::move(label));
}

VisitDistribution VisitDistribution::uniform(int lo, int hi) {
  if (lo <= 0 || hi < lo) throw std::invalid_argument("visit distribution: uniform needs 0 < lo <= hi");
  std::vector<int> support(static_cast<std::size_t>(hi - lo + 1));
  std::iota(support.begin(), support.end(), lo);
  std::vector<double> probs(support.size(), 1.0 / static_cast<double>(support.size()));
  return VisitDistribution(std::move(support), std::move(probs),
                           "uniform:" + std::to_string(lo) + ':' + std::to_string(hi));
}

VisitDistribution VisitDistribution::parse(const std::string& text) {
  const std::string t = trim(text);
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    // A bare integer is shorthand for a constant distribution.
    return constant(parse_int(t, "visits_per_agent"));
  }
  const std::string kind = t.substr(0, colon);
  const std::string rest = t.substr(colon + 1);
  if (kind == "constant") return constant(parse_int(trim(rest), "visits_per_agent"));
  if (kind == "uniform") {
    const auto parts = split(rest, ':');
    if (parts.size() != 2) throw std::invalid_argument("visits_per_agent: expected uniform:LO:HI");
    return uniform(parse_int(parts[0], "uniform lo"), parse_int(parts[1], "uniform hi"));
  }
  if (kind == "empirical") {
    std::vector<int> support;
    std::vector<double> probs;
    for (const auto& item : split(rest, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("visits_per_agent: expected VALUE=PROB pairs");
      support.push_back(parse_int(trim(item.substr(0, eq)), "empirical value"));
      probs.push_back(parse_double(trim(item.substr(eq + 1)), "empirical probability"));
    }
    return empirical(std::move(support), std::move(probs));
  }
  throw std::invalid_argument("visits_per_agent: unknown distribution kind '" + kind + "'");
}

std::string VisitDistribution::to_string() const { return label_; }

int VisitDistribution::max_value() const { return *std::max_element(support_.begin(), support_.end()); }
int VisitDistribution::min_value() const { return *std::min_element(support_.begin(), support_.end()); }

int VisitDistribution::sample(RngStream& rng) const {
  if (is_constant()) return support_.front();
  return support_[rng.categorical(probabilities_, 1.0)];
}

Moments moments(const VisitDistribution& dist) {
  Moments m;
  const auto& s = dist.support();
  const auto& p = dist.probabilities();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x = s[i];
    m.mean += p[i] * x;
    m.second_moment += p[i] * x * x;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double dx = s[i] - m.mean;
    m.variance += p[i] * dx * dx;
  }
  return m;
}

double denominator(const VisitDistribution& dist) {
  const Moments m = moments(dist);
  const double d = m.variance + m.mean * (m.mean - 1.0);
  if (!(d > 0.0)) {
    throw std::domain_error("moment denominator is not positive; coverage formulas do not apply");
  }
  return d;
}

// ---------------------------------------------------------------------------
// enums

std::string to_string(LifespanMode m) { return m == LifespanMode::disjoint ? "disjoint" : "overlapping"; }
std::string to_string(RefreshGranularity g) { return g == RefreshGranularity::visit ? "visit" : "step"; }
std::string to_string(ConnectionMode c) { return c == ConnectionMode::distinct ? "distinct" : "multiset"; }

LifespanMode parse_lifespan_mode(const std::string& s) {
  if (s == "disjoint") return LifespanMode::disjoint;
  if (s == "overlapping") return LifespanMode::overlapping;
  throw std::invalid_argument("lifespan_mode: expected disjoint|overlapping, got '" + s + "'");
}

RefreshGranularity parse_refresh_granularity(const std::string& s) {
  if (s == "visit") return RefreshGranularity::visit;
  if (s == "step") return RefreshGranularity::step;
  throw std::invalid_argument("refresh_granularity: expected visit|step, got '" + s + "'");
}

ConnectionMode parse_connection_mode(const std::string& s) {
  if (s == "distinct") return ConnectionMode::distinct;
  if (s == "multiset") return ConnectionMode::multiset;
  throw std::invalid_argument("connection_mode: expected distinct|multiset, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// SimConfig

void SimConfig::validate() const {
  if (n_places <= 0) throw std::invalid_argument("n_places must be positive");
  if (n_agents <= 0) throw std::invalid_argument("n_agents must be positive");
  if (runs <= 0) throw std::invalid_argument("runs must be positive");
  if (visits_per_step_overlap <= 0) throw std::invalid_argument("visits_per_step_overlap must be positive");
  if (!(refresh_prob >= 0.0 && refresh_prob <= 1.0)) throw std::invalid_argument("refresh_prob must lie in [0, 1]");
  if (!(randomness >= 0.0)) throw std::invalid_argument("randomness must be >= 0");
  if (!(clustering_exp >= 0.0)) throw std::invalid_argument("clustering_exp must be >= 0");
  if (moments(visits_per_agent).mean > n_places) {
    throw std::invalid_argument("visits_per_agent mean exceeds n_places");
  }
  if (connection_mode == ConnectionMode::distinct && visits_per_agent.max_value() > n_places) {
    throw std::invalid_argument("distinct visits: an agent cannot visit more places than exist");
  }
}

std::vector<std::string> config_keys() {
  return {"n_places",       "visits_per_agent",    "refresh_prob",           "randomness",
          "clustering_exp", "n_agents",            "lifespan_mode",          "visits_per_step_overlap",
          "refresh_granularity", "connection_mode", "seed",                  "runs"};
}

void set_config_value(SimConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "n_places") c.n_places = parse_int(value, key);
  else if (key == "visits_per_agent") c.visits_per_agent = VisitDistribution::parse(value);
  else if (key == "refresh_prob") c.refresh_prob = parse_double(value, key);
  else if (key == "randomness") c.randomness = parse_double(value, key);
  else if (key == "clustering_exp") c.clustering_exp = parse_double(value, key);
  else if (key == "n_agents") c.n_agents = parse_int(value, key);
  else if (key == "lifespan_mode") c.lifespan_mode = parse_lifespan_mode(value);
  else if (key == "visits_per_step_overlap") c.visits_per_step_overlap = parse_int(value, key);
  else if (key == "refresh_granularity") c.refresh_granularity = parse_refresh_granularity(value);
  else if (key == "connection_mode") c.connection_mode = parse_connection_mode(value);
  else if (key == "seed") c.seed = parse_u64(value, key);
  else if (key == "runs") c.runs = parse_int(value, key);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

std::string serialize_config(const SimConfig& c) {
  std::ostringstream out;
  out << "n_places = " << c.n_places << '\n'
      << "visits_per_agent = " << c.visits_per_agent.to_string() << '\n'
      << "refresh_prob = " << format_double(c.refresh_prob) << '\n'
      << "randomness = " << format_double(c.randomness) << '\n'
      << "clustering_exp = " << format_double(c.clustering_exp) << '\n'
      << "n_agents = " << c.n_agents << '\n'
      << "lifespan_mode = " << to_string(c.lifespan_mode) << '\n'
      << "visits_per_step_overlap = " << c.visits_per_step_overlap << '\n'
      << "refresh_granularity = " << to_string(c.refresh_granularity) << '\n'
      << "connection_mode = " << to_string(c.connection_mode) << '\n'
      << "seed = " << c.seed << '\n'
      << "runs = " << c.runs << '\n';
  return out.str();
}

SimConfig parse_config(const std::string& text, SimConfig base) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

SimConfig load_config(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::vector<std::string> apply_env_overrides(SimConfig& config, const std::string& prefix) {
  std::vector<std::string> applied;
  for (const auto& key : config_keys()) {
    std::string name = prefix;
    for (char ch : key) name += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* value = std::getenv(name.c_str())) {
      set_config_value(config, key, value);
      applied.push_back(key);
    }
  }
  return applied;
}

}  // namespace throwbox
