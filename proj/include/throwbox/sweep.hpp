#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace throwbox {

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// "key=a,b,c", "key=lo:hi:step" (inclusive numeric range) or, for values that
/// themselves contain commas, "key=a|b|c".
SweepAxis parse_sweep_axis(const std::string& text);

/// Expands lo:hi:step into its values; the end point is kept when it lies on
/// the grid within rounding.
std::vector<double> numeric_range(double lo, double hi, double step);

using SweepCell = std::vector<std::pair<std::string, std::string>>;

/// Cartesian product in row-major order (last axis varies fastest). An empty
/// axis list yields a single empty cell.
std::vector<SweepCell> expand_grid(const std::vector<SweepAxis>& axes);

template <typename Result>
struct CellOutcome {
  std::optional<Result> result;
  std::string error;
};

/// Runs fn on every cell with up to `parallelism` workers. Exceptions are
/// captured per cell. Outcomes come back in cell order; `progress` (which may
/// be empty) is called under a lock after each finished cell.
template <typename Result>
std::vector<CellOutcome<Result>> run_cells(const std::vector<SweepCell>& cells,
                                           const std::function<Result(const SweepCell&)>& fn, int parallelism,
                                           const std::function<void(std::size_t, const CellOutcome<Result>&)>& progress = {}) {
  std::vector<CellOutcome<Result>> out(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        out[i].result = fn(cells[i]);
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
      if (progress) {
        std::lock_guard lock(report);
        progress(i, out[i]);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(parallelism, static_cast<int>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

}  // namespace throwbox
