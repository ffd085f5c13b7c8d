#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "table.hpp"
#include "throwbox/analytics.hpp"
#include "throwbox/bnw.hpp"
#include "throwbox/calibration.hpp"
#include "throwbox/dtn.hpp"
#include "throwbox/io.hpp"
#include "throwbox/model.hpp"
#include "throwbox/stats.hpp"
#include "throwbox/sweep.hpp"
#include "throwbox/trace.hpp"
#include "throwbox/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace throwbox;
using throwbox::cli::Table;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::string out = "results";
  int parallelism = 1;
  bool json = false;
  std::vector<std::string> sets;
  std::vector<std::string> sweeps;
};

std::string g_command_line;

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "base seed (run r uses seed + r)");
  sub->add_option("--runs", c.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--parallelism", c.parallelism, "worker threads")->check(CLI::PositiveNumber);
  sub->add_flag("--json", c.json, "write JSON instead of CSV");
  sub->add_option("--set", c.sets, "override a config key: --set key=value (repeatable)");
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a{{"p", "refresh_prob"},   {"N", "n_places"},
                                                    {"mu", "visits_per_agent"}, {"delta", "randomness"},
                                                    {"alpha", "clustering_exp"}, {"T", "n_agents"}};
  return a;
}

std::string canonical_key(const std::string& key) {
  const auto it = aliases().find(key);
  return it == aliases().end() ? key : it->second;
}

/// visits_per_agent for "spread=h": discrete uniform on [mean - h, mean + h].
void apply_key(SimConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = canonical_key(raw_key);
  if (key == "spread") {
    const double mean = moments(c.visits_per_agent).mean;
    const int centre = static_cast<int>(std::lround(mean));
    if (std::abs(mean - centre) > 1e-12) throw std::invalid_argument("spread needs an integer mean visit count");
    const int h = std::stoi(value);
    c.visits_per_agent = h == 0 ? VisitDistribution::constant(centre) : VisitDistribution::uniform(centre - h, centre + h);
    return;
  }
  set_config_value(c, key, value);
}

SimConfig resolve_config(const Common& common) {
  SimConfig c;
  if (!common.config_path.empty()) c = load_config(common.config_path, c);
  apply_env_overrides(c);
  for (const auto& s : common.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    apply_key(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (common.seed) c.seed = *common.seed;
  if (common.runs) c.runs = *common.runs;
  c.validate();
  return c;
}

json config_json(const SimConfig& c) {
  json j;
  std::istringstream in(serialize_config(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

void prepare_out(const std::string& dir) { fs::create_directories(dir); }

void write_manifest(const std::string& dir, const std::string& kind, const SimConfig* config, json extra,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "throwbox";
  m["version"] = kVersion;
  m["kind"] = kind;
  m["command"] = g_command_line;
  if (config) {
    m["seed"] = config->seed;
    m["config"] = config_json(*config);
    m["config_text"] = serialize_config(*config);
  }
  m["options"] = std::move(extra);
  m["outputs"] = outputs;
  write_text_file(dir + "/manifest.json", m.dump(2) + "\n");
}

std::vector<SweepAxis> parse_axes(const std::vector<std::string>& specs) {
  std::vector<SweepAxis> axes;
  for (const auto& s : specs) axes.push_back(parse_sweep_axis(s));
  return axes;
}

std::string describe(const SweepCell& cell) {
  std::string s;
  for (const auto& [k, v] : cell) s += (s.empty() ? "" : " ") + k + "=" + v;
  return s.empty() ? "(base)" : s;
}

template <typename R>
std::function<void(std::size_t, const CellOutcome<R>&)> progress_printer(std::size_t total,
                                                                         const std::vector<SweepCell>& cells) {
  return [total, &cells](std::size_t i, const CellOutcome<R>& o) {
    std::cerr << "[cell " << (i + 1) << "/" << total << "] " << describe(cells[i])
              << (o.result ? " ok" : " FAILED: " + o.error) << '\n';
  };
}

json axes_json(const std::vector<SweepAxis>& axes) {
  json j = json::array();
  for (const auto& a : axes) j.push_back({{"key", a.key}, {"values", a.values}});
  return j;
}

// ---------------------------------------------------------------------------
// sim

struct SimSummary {
  double stabilized_mean = 0, stabilized_sem = 0, final_mean = 0;
  double time90_mean = NAN;
  long long reached90 = 0;
};

SimSummary summarize(const SimConfig& c, const EnsembleResult& r) {
  SimSummary s;
  s.stabilized_mean = r.stabilized_mean();
  s.stabilized_sem = r.stabilized_sem();
  double fin = 0;
  for (auto v : r.final_place_coverage) fin += static_cast<double>(v);
  s.final_mean = fin / static_cast<double>(r.final_place_coverage.size());
  std::vector<double> times;
  for (const auto& run : r.runs) {
    if (auto t = time_to_agent_coverage(run, 0.9, c.n_agents)) times.push_back(static_cast<double>(*t));
  }
  s.reached90 = static_cast<long long>(times.size());
  if (!times.empty()) s.time90_mean = mean_sem(times).mean;
  return s;
}

int cmd_sim(const Common& common) {
  const SimConfig base = resolve_config(common);
  prepare_out(common.out);
  const auto axes = parse_axes(common.sweeps);
  std::vector<std::string> outputs;
  if (axes.empty()) {
    const auto r = ensemble(base, {common.parallelism, true});
    std::ostringstream csv;
    if (common.json) {
      write_text_file(common.out + "/series.json", series_json(r).dump(2) + "\n");
      outputs.push_back("series.json");
    } else {
      write_series_csv(csv, r);
      write_text_file(common.out + "/series.csv", csv.str());
      outputs.push_back("series.csv");
    }
    const auto s = summarize(base, r);
    json summary{{"stabilized_mean", s.stabilized_mean}, {"stabilized_sem", s.stabilized_sem},
                 {"final_place_coverage_mean", s.final_mean}, {"runs_reaching_90pct_agents", s.reached90}};
    if (s.reached90 > 0) summary["time_to_90pct_agents_mean"] = s.time90_mean;
    write_text_file(common.out + "/summary.json", summary.dump(2) + "\n");
    outputs.push_back("summary.json");
    std::cout << "stabilized place coverage " << format_number(s.stabilized_mean) << " +/- "
              << format_number(s.stabilized_sem) << " over " << base.runs << " runs\n";
    write_manifest(common.out, "dtn-sim", &base, {{"sweep", json::array()}}, outputs);
    return 0;
  }

  const auto cells = expand_grid(axes);
  std::function<SimSummary(const SweepCell&)> fn = [&](const SweepCell& cell) {
    SimConfig c = base;
    for (const auto& [k, v] : cell) apply_key(c, k, v);
    c.validate();
    return summarize(c, ensemble(c, {1, true}));
  };
  const auto outcomes = run_cells(cells, fn, common.parallelism, progress_printer<SimSummary>(cells.size(), cells));
  std::vector<std::string> cols;
  for (const auto& a : axes) cols.push_back(a.key);
  for (const char* c : {"stabilized_mean", "stabilized_sem", "final_mean", "time_to_90pct_agents_mean",
                        "runs_reaching_90pct_agents", "error"}) {
    cols.emplace_back(c);
  }
  Table t(cols);
  int failed = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<cli::Cell> row;
    for (const auto& kv : cells[i]) row.emplace_back(kv.second);
    if (const auto& r = outcomes[i].result) {
      row.insert(row.end(), {r->stabilized_mean, r->stabilized_sem, r->final_mean, r->time90_mean, r->reached90,
                             std::string()});
    } else {
      ++failed;
      row.insert(row.end(), {NAN, NAN, NAN, NAN, 0LL, outcomes[i].error});
    }
    t.add(std::move(row));
  }
  outputs.push_back(t.save(common.out, "sweep", common.json));
  write_manifest(common.out, "dtn-sim", &base, {{"sweep", axes_json(axes)}}, outputs);
  std::cerr << cells.size() << " cells, " << failed << " failed\n";
  return failed == 0 ? 0 : 3;
}

// ---------------------------------------------------------------------------
// bnw

struct BnwOptions {
  std::string connections = "multiset";
  std::int64_t stride = 10;
  bool edges = false;
};

int cmd_bnw(const Common& common, const BnwOptions& opt) {
  const SimConfig base = resolve_config(common);
  const ConnectionMode mode = parse_connection_mode(opt.connections);
  prepare_out(common.out);
  auto axes = parse_axes(common.sweeps);
  if (axes.empty()) axes.push_back({"v", {"0.05"}});
  const auto cells = expand_grid(axes);

  struct BnwCell {
    std::vector<std::int64_t> t;
    std::vector<double> gb_mean, gb_sem;
    double theorem_rate = 0, gb_final = 0, gb_final_sem = 0, cv_final = 0, analytic = NAN, v = 0;
  };
  std::function<BnwCell(const SweepCell&)> fn = [&](const SweepCell& cell) {
    SimConfig c = base;
    double v = 0.0;
    bool have_v = false;
    for (const auto& [k, val] : cell) {
      if (k == "v") {
        v = std::stod(val);
        have_v = true;
      } else {
        apply_key(c, k, val);
      }
    }
    if (!have_v) throw std::invalid_argument("bnw sweep needs a v axis");
    c.validate();
    const MobilityParams mp{c.randomness, c.clustering_exp};
    std::vector<std::vector<GbSample>> all;
    for (int r = 0; r < c.runs; ++r) {
      RngStream rng(run_seed(c.seed, static_cast<std::uint64_t>(r)));
      all.push_back(gb_timeseries(c.n_places, c.visits_per_agent, v, c.n_agents, mp, rng, mode, opt.stride));
    }
    BnwCell out;
    out.v = v;
    const std::size_t len = all.front().size();
    std::vector<double> col(all.size());
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t r = 0; r < all.size(); ++r) col[r] = all[r][i].largest;
      const auto ms = mean_sem(col);
      out.t.push_back(all.front()[i].t);
      out.gb_mean.push_back(ms.mean);
      out.gb_sem.push_back(ms.sem);
    }
    int holds = 0;
    double cv_sum = 0;
    for (const auto& s : all) {
      holds += s.back().count + s.back().largest == c.n_places + 1;
      cv_sum += s.back().count;
    }
    out.theorem_rate = static_cast<double>(holds) / static_cast<double>(all.size());
    out.gb_final = out.gb_mean.back();
    out.gb_final_sem = out.gb_sem.back();
    out.cv_final = cv_sum / static_cast<double>(all.size());
    try {
      out.analytic = gb_analytic(FormulaParams<double>{c.n_places, denominator(c.visits_per_agent), v});
    } catch (const std::exception&) {
    }
    return out;
  };
  const auto outcomes = run_cells(cells, fn, common.parallelism, progress_printer<BnwCell>(cells.size(), cells));

  std::vector<std::string> cols;
  for (const auto& a : axes) cols.push_back(a.key);
  Table summary([&] {
    auto c = cols;
    for (const char* s : {"gb_final_mean", "gb_final_sem", "cv_final_mean", "theorem_rate", "gb_analytic", "error"}) {
      c.emplace_back(s);
    }
    return c;
  }());
  Table series([&] {
    auto c = cols;
    for (const char* s : {"t", "gb_mean", "gb_sem"}) c.emplace_back(s);
    return c;
  }());
  int failed = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::vector<cli::Cell> key;
    for (const auto& kv : cells[i]) key.emplace_back(kv.second);
    auto row = key;
    if (const auto& r = outcomes[i].result) {
      row.insert(row.end(), {r->gb_final, r->gb_final_sem, r->cv_final, r->theorem_rate, r->analytic, std::string()});
      for (std::size_t j = 0; j < r->t.size(); ++j) {
        auto srow = key;
        srow.insert(srow.end(), {static_cast<long long>(r->t[j]), r->gb_mean[j], r->gb_sem[j]});
        series.add(std::move(srow));
      }
    } else {
      ++failed;
      row.insert(row.end(), {NAN, NAN, NAN, NAN, NAN, outcomes[i].error});
    }
    summary.add(std::move(row));
  }
  std::vector<std::string> outputs{summary.save(common.out, "bnw_summary", common.json),
                                   series.save(common.out, "bnw_series", common.json)};
  if (opt.edges) {
    // Edge lists of realization 0 at t = T for the first v of the grid.
    double v = 0.05;
    for (const auto& [k, val] : cells.front()) {
      if (k == "v") v = std::stod(val);
    }
    RngStream rng(run_seed(base.seed, 0));
    const auto g = grow_preferential(base.n_places, base.visits_per_agent, base.n_agents,
                                     {base.randomness, base.clustering_exp}, rng, mode);
    const auto w = project(g);
    std::ostringstream pe, te;
    write_projection_edges(pe, w);
    write_threshold_edges(te, threshold(w, v, std::max<std::int64_t>(1, base.n_agents)));
    write_text_file(common.out + "/projection_edges.txt", pe.str());
    write_text_file(common.out + "/threshold_edges.txt", te.str());
    outputs.insert(outputs.end(), {"projection_edges.txt", "threshold_edges.txt"});
  }
  write_manifest(common.out, "bnw-sim", &base,
                 {{"sweep", axes_json(axes)}, {"connections", opt.connections}, {"stride", opt.stride},
                  {"edges", opt.edges}},
                 outputs);
  return failed == 0 ? 0 : 3;
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticOptions {
  int n_places = 100;
  std::string dist = "constant:20";
  std::string v_grid = "0:0.5:0.01";
  bool degree = false;
  std::string p_grid;
  double k_const = 1.0;
};

std::vector<double> grid_values(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& s : parse_sweep_axis(key + "=" + text).values) out.push_back(std::stod(s));
  return out;
}

int cmd_analytic(const Common& common, const AnalyticOptions& opt) {
  prepare_out(common.out);
  const auto dist = VisitDistribution::parse(opt.dist);
  const Moments mom = moments(dist);
  const double d = denominator(dist);
  std::vector<std::string> outputs;

  Table gb({"v", "gb_analytic", "fraction_of_n"});
  Table deg({"v", "k", "cumulative_degree"});
  for (double v : grid_values("v", opt.v_grid)) {
    const FormulaParams<double> fp{opt.n_places, d, v};
    const double g = gb_analytic(fp);
    gb.add({v, g, g / opt.n_places});
    if (opt.degree) {
      for (int k = 0; k < opt.n_places - 1; ++k) deg.add({v, static_cast<long long>(k), cumulative_degree<double>(k, fp)});
    }
  }
  outputs.push_back(gb.save(common.out, "analytic_gb", common.json));
  if (opt.degree) outputs.push_back(deg.save(common.out, "analytic_degree", common.json));
  if (!opt.p_grid.empty()) {
    Table gd({"p", "gd_simplified"});
    for (double p : grid_values("p", opt.p_grid)) gd.add({p, gd_simplified(p, opt.n_places, mom.mean, opt.k_const)});
    outputs.push_back(gd.save(common.out, "analytic_gd", common.json));
  }
  write_manifest(common.out, "analytic-sweep", nullptr,
                 {{"n_places", opt.n_places}, {"dist", opt.dist}, {"denominator", d}, {"v_grid", opt.v_grid},
                  {"degree", opt.degree}, {"p_grid", opt.p_grid}, {"k_const", opt.k_const}},
                 outputs);
  std::cout << "N=" << opt.n_places << " D=" << format_number(d) << " rows=" << gb.size() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOptions {
  std::string p_grid = "0.01:0.2:0.01";
  std::string curve_path;
};

std::vector<CurvePoint> read_curve(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<CurvePoint> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("p,", 0) == 0) continue;
    std::istringstream f(line);
    std::string a, b, c;
    std::getline(f, a, ',');
    std::getline(f, b, ',');
    std::getline(f, c, ',');
    out.push_back({std::stod(a), std::stod(b), c.empty() ? 0.0 : std::stod(c)});
  }
  return out;
}

int cmd_calibrate(const Common& common, const CalibrateOptions& opt) {
  const SimConfig base = resolve_config(common);
  prepare_out(common.out);
  std::vector<CurvePoint> curve;
  if (!opt.curve_path.empty()) {
    curve = read_curve(opt.curve_path);
  } else {
    const std::vector<SweepAxis> axes{parse_sweep_axis("refresh_prob=" + opt.p_grid)};
    const auto cells = expand_grid(axes);
    std::function<CurvePoint(const SweepCell&)> fn = [&](const SweepCell& cell) {
      SimConfig c = base;
      apply_key(c, cell.front().first, cell.front().second);
      const auto r = ensemble(c);
      return CurvePoint{c.refresh_prob, r.stabilized_mean(), r.stabilized_sem()};
    };
    const auto outcomes = run_cells(cells, fn, common.parallelism, progress_printer<CurvePoint>(cells.size(), cells));
    for (const auto& o : outcomes) {
      if (!o.result) throw std::runtime_error("simulation cell failed: " + o.error);
      curve.push_back(*o.result);
    }
  }
  const double d = denominator(base.visits_per_agent);
  CalibrationResult res = fit(curve, analytic_gb_curve(base.n_places, d));
  res.k_const = fit_k_const(curve, base.n_places, d);
  write_text_file(common.out + "/calibration.json", to_json(res) + "\n");
  Table overlay({"p", "gd_sim", "gd_sem", "v", "gb_pred"});
  for (const auto& pt : curve) {
    const auto pred = predict_coverage(pt.p, res, {base.n_places, d, 0.0});
    overlay.add({pt.p, pt.coverage, pt.sem, pred.v, pred.coverage});
  }
  std::vector<std::string> outputs{"calibration.json", overlay.save(common.out, "overlay", common.json)};
  write_manifest(common.out, "calibrate", &base, {{"p_grid", opt.p_grid}, {"curve", opt.curve_path}}, outputs);
  std::cout << "v = " << format_number(res.m) << " * p + " << format_number(res.c) << "  rmse "
            << format_number(res.rmse) << " (" << format_number(100.0 * res.rmse / base.n_places) << "% of N)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// trace

struct TraceOptions {
  std::string input;
  double radius = 0.0;
  int top = 20;
  double p = 0.1;
  int every = 10;
  bool no_split = false;
};

int cmd_trace(const Common& common, const TraceOptions& opt) {
  SimConfig base = resolve_config(common);
  prepare_out(common.out);
  auto records = load_trace(opt.input);
  if (!opt.no_split) records = split_days(records);
  const auto circles = cluster_places(records, opt.radius);
  const auto visits = extract_visits(records, circles);
  const auto top = top_places(visits, opt.top);
  if (top.fewer_than_k) {
    std::cerr << "warning: only " << top.original_id.size() << " places found, fewer than K=" << opt.top << '\n';
  }
  Table places({"rank", "place", "x", "y", "visits"});
  for (std::size_t i = 0; i < top.original_id.size(); ++i) {
    const auto& c = circles[static_cast<std::size_t>(top.original_id[i])];
    places.add({static_cast<long long>(i), static_cast<long long>(top.original_id[i]), c.x, c.y,
                static_cast<long long>(top.counts[i])});
  }
  std::vector<std::string> outputs{places.save(common.out, "places", common.json)};
  std::ostringstream vs;
  write_visits_csv(vs, top.visits);
  write_text_file(common.out + "/visits.csv", vs.str());
  outputs.push_back("visits.csv");
  const auto r = replay_ensemble(top.visits, static_cast<int>(top.original_id.size()), opt.p, opt.every, base.runs,
                                 base.seed);
  if (common.json) {
    write_text_file(common.out + "/series.json", series_json(r).dump(2) + "\n");
    outputs.push_back("series.json");
  } else {
    std::ostringstream s;
    write_series_csv(s, r);
    write_text_file(common.out + "/series.csv", s.str());
    outputs.push_back("series.csv");
  }
  write_manifest(common.out, "trace-replay", &base,
                 {{"input", opt.input}, {"radius", opt.radius}, {"top", opt.top}, {"p", opt.p},
                  {"measure_every", opt.every}, {"split_days", !opt.no_split}},
                 outputs);
  std::cout << records.size() << " records, " << circles.size() << " circles, " << top.visits.size()
            << " visits over top " << top.original_id.size() << " places\n";
  return 0;
}

// ---------------------------------------------------------------------------
// walkthrough replay

int cmd_walkthrough(const std::string& schedule_path, const std::string& out, bool as_json) {
  const std::string text = schedule_path.empty() ? walkthrough_schedule_text() : read_text_file(schedule_path);
  const auto sched = parse_schedule(text);
  const auto series = run_scripted(sched);
  // Entry s is the state after step s, i.e. at the beginning of step s + 1.
  Table t({"step", "agent_coverage", "place_coverage"});
  for (std::size_t s = 0; s < series.size(); ++s) {
    t.add({static_cast<long long>(s + 1), static_cast<long long>(series.agent_coverage[s]),
           static_cast<long long>(series.place_coverage[s])});
  }
  std::cout << (as_json ? t.json().dump(2) + "\n" : t.csv());
  if (!out.empty()) {
    prepare_out(out);
    const auto name = t.save(out, "walkthrough", as_json);
    write_manifest(out, "walkthrough-replay", nullptr, {{"schedule", schedule_path}}, {name});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) g_command_line += (i ? " " : "") + std::string(i ? argv[i] : "throwbox");

  CLI::App app{"Throwbox DTN coverage simulator and BNW analytics"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common sim_c, bnw_c, ana_c, cal_c, trace_c;

  auto* sim = app.add_subcommand("sim", "DTN dissemination ensemble, optionally swept");
  add_common(sim, sim_c);
  sim->add_option("--sweep", sim_c.sweeps, "axis key=values (p, N, mu, delta, alpha, T, spread or any config key)");

  BnwOptions bnw_o;
  auto* bnw = app.add_subcommand("bnw", "grow BNWs and track the thresholded projection's largest component");
  add_common(bnw, bnw_c);
  bnw->add_option("--sweep", bnw_c.sweeps, "axis key=values; v is the threshold coefficient");
  bnw->add_option("--connections", bnw_o.connections, "multiset or distinct")->capture_default_str();
  bnw->add_option("--stride", bnw_o.stride, "sample G_b every this many agents")->capture_default_str();
  bnw->add_flag("--edges", bnw_o.edges, "export projection and thresholded edge lists of run 0");

  AnalyticOptions ana_o;
  auto* ana = app.add_subcommand("analytic", "evaluate the closed-form coverage formulas over a grid");
  add_common(ana, ana_c);
  ana->add_option("--n-places,-N", ana_o.n_places, "N")->capture_default_str();
  ana->add_option("--dist", ana_o.dist, "visit distribution")->capture_default_str();
  ana->add_option("--v", ana_o.v_grid, "threshold grid lo:hi:step or list")->capture_default_str();
  ana->add_flag("--degree", ana_o.degree, "also emit F_v(k) for every k");
  ana->add_option("--p", ana_o.p_grid, "refresh grid for the simplified coverage formula");
  ana->add_option("--k-const", ana_o.k_const, "constant of the simplified coverage formula")->capture_default_str();

  CalibrateOptions cal_o;
  auto* cal = app.add_subcommand("calibrate", "fit v = m p + c between simulated and analytic coverage");
  add_common(cal, cal_c);
  cal->add_option("--p-grid", cal_o.p_grid, "refresh grid to simulate")->capture_default_str();
  cal->add_option("--curve", cal_o.curve_path, "use a precomputed p,coverage[,sem] CSV instead of simulating")
      ->check(CLI::ExistingFile);

  TraceOptions trace_o;
  auto* trace = app.add_subcommand("trace", "cluster a GPS trace into places and replay dissemination");
  add_common(trace, trace_c);
  trace->add_option("--input", trace_o.input, "agent_id,timestamp,x,y file")->required()->check(CLI::ExistingFile);
  trace->add_option("--radius", trace_o.radius, "place circle radius in metres")->required();
  trace->add_option("--top", trace_o.top, "keep the K most visited places")->capture_default_str();
  trace->add_option("--p", trace_o.p, "refresh probability")->capture_default_str();
  trace->add_option("--every", trace_o.every, "refresh and measure every k visits")->capture_default_str();
  trace->add_flag("--no-split-days", trace_o.no_split, "keep multi-day agents as one agent");

  std::string fig_schedule, fig_out;
  bool fig_json = false;
  auto* fig = app.add_subcommand("replay-figure1", "replay the five-place walkthrough schedule");
  fig->add_option("--schedule", fig_schedule, "schedule file instead of the built-in one")->check(CLI::ExistingFile);
  fig->add_option("--out", fig_out, "also write the table to this directory");
  fig->add_flag("--json", fig_json, "JSON table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_sim(sim_c);
    if (*bnw) return cmd_bnw(bnw_c, bnw_o);
    if (*ana) return cmd_analytic(ana_c, ana_o);
    if (*cal) return cmd_calibrate(cal_c, cal_o);
    if (*trace) return cmd_trace(trace_c, trace_o);
    if (*fig) return cmd_walkthrough(fig_schedule, fig_out, fig_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
