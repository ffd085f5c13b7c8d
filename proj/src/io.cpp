#include "throwbox/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace throwbox {

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& out, const EnsembleResult& r) {
  out << "time,place_coverage_mean,place_coverage_sem,agent_coverage_mean,agent_coverage_sem\n";
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << r.times[i] << ',' << format_number(r.place_mean[i]) << ',' << format_number(r.place_sem[i]) << ','
        << format_number(r.agent_mean[i]) << ',' << format_number(r.agent_sem[i]) << '\n';
  }
}

nlohmann::ordered_json series_json(const EnsembleResult& r) {
  nlohmann::ordered_json j;
  j["time"] = r.times;
  j["place_coverage_mean"] = r.place_mean;
  j["place_coverage_sem"] = r.place_sem;
  j["agent_coverage_mean"] = r.agent_mean;
  j["agent_coverage_sem"] = r.agent_sem;
  j["final_place_coverage"] = r.final_place_coverage;
  j["stabilized_coverage"] = r.stabilized;
  return j;
}

EnsembleResult as_ensemble(const CoverageSeries& series) { return aggregate({series}, false); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace throwbox
