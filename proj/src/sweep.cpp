#include "throwbox/sweep.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>


namespace throwbox {

namespace {

bool to_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<double> numeric_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep range: step must be positive");
  if (hi < lo) throw std::invalid_argument("sweep range: end below start");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw std::invalid_argument("sweep '" + text + "': expected key=values");
  }
  SweepAxis axis{text.substr(0, eq), {}};
  const std::string rhs = text.substr(eq + 1);
  const auto parts = split(rhs, ':');
  double lo = 0, hi = 0, step = 0;
  if (rhs.find('|') == std::string::npos && rhs.find(',') == std::string::npos && parts.size() == 3 &&
      to_double(parts[0], lo) && to_double(parts[1], hi) && to_double(parts[2], step)) {
    for (double v : numeric_range(lo, hi, step)) {
      // Snap to 12 significant digits so 0.1 + 2 * 0.05 prints as 0.2.
      std::ostringstream s;
      s.precision(12);
      s << v;
      axis.values.push_back(s.str());
    }
  } else {
    axis.values = split(rhs, rhs.find('|') != std::string::npos ? '|' : ',');
  }
  if (axis.values.empty()) throw std::invalid_argument("sweep '" + text + "': no values");
  return axis;
}

std::vector<SweepCell> expand_grid(const std::vector<SweepAxis>& axes) {
  std::vector<SweepCell> cells{{}};
  for (const auto& axis : axes) {
    std::vector<SweepCell> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (const auto& value : axis.values) {
        SweepCell c = cell;
        c.emplace_back(axis.key, value);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace throwbox
