#include "chflow/simulation.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace chflow {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json checks_json(const DiagnosticReport& rep) {
  json arr = json::array();
  for (const auto& c : rep.checks) {
    arr.push_back({{"name", c.name},
                   {"value", number_or_null(c.value)},
                   {"limit", c.limit},
                   {"asserted", c.asserted},
                   {"passed", c.passed}});
  }
  return arr;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

RunResult run_model(const SimulationConfig& cfg) {
  cfg.validate();
  const PeriodicGrid grid(cfg.n);
  const AlgebraElement U0 = build_initial_condition(cfg.initial, grid, cfg.model.alpha);
  RunResult result;
  result.trajectory = advance(State::initial(U0, cfg.flow_map), cfg.model, cfg.stepper, cfg.thresholds);
  result.report = build_report(result.trajectory, cfg.model);
  return result;
}

std::string trajectory_csv(const DiagnosticReport& report) {
  std::string out =
      "t,metric_norm_sq,metric_drift,mean_u,min_rho,sup_ux,min_ux,lagrangian_dev,stretch_ratio,"
      "ladder_k0,ladder_k1,tail_fraction\n";
  for (const auto& r : report.rows) {
    const std::string cells[] = {format_double(r.t),         format_double(r.metric_norm_sq),
                                 format_double(r.metric_drift), format_double(r.mean_u),
                                 format_double(r.min_rho),   format_double(r.sup_ux),
                                 format_double(r.min_ux),    optional_cell(r.lagrangian_dev),
                                 optional_cell(r.stretch_ratio), format_double(r.ladder_k0),
                                 format_double(r.ladder_k1), format_double(r.tail_fraction)};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

std::string fields_csv(const State& st, const ModelParams& p) {
  const PeriodicGrid& grid = st.U.grid();
  const SpectralField m = apply_power(st.U.u, p.s);
  std::string out = "x,u,rho,m\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out += format_double(grid.point(j));
    out += ',';
    out += format_double(st.U.u.samples()[j]);
    out += ',';
    out += format_double(st.U.rho.samples()[j]);
    out += ',';
    out += format_double(m.samples()[j]);
    out += '\n';
  }
  return out;
}

json summary_json(const SimulationConfig& cfg, const RunResult& result) {
  const auto& term = result.trajectory.termination;
  const auto& rep = result.report;
  json j;
  j["engine_version"] = kEngineVersion;
  j["termination"] = {{"completed", term.completed},
                      {"reason", to_string(term.reason)},
                      {"time", term.time},
                      {"steps_taken", result.trajectory.steps_taken}};
  json m;
  m["max_metric_drift"] = number_or_null(rep.max_metric_drift);
  m["max_mean_drift"] = number_or_null(rep.max_mean_drift);
  m["max_lagrangian_dev"] = rep.max_lagrangian_dev ? number_or_null(*rep.max_lagrangian_dev) : json(nullptr);
  m["min_rho"] = number_or_null(rep.min_rho);
  m["max_sup_ux"] = number_or_null(rep.max_sup_ux);
  m["min_min_ux"] = number_or_null(rep.min_min_ux);
  m["max_stretch_ratio"] = rep.max_stretch_ratio ? number_or_null(*rep.max_stretch_ratio) : json(nullptr);
  m["max_ladder_k0"] = number_or_null(rep.max_ladder_k0);
  m["max_ladder_k1"] = number_or_null(rep.max_ladder_k1);
  m["max_tail_fraction"] = number_or_null(rep.max_tail_fraction);
  m["min_apriori_slack"] = number_or_null(rep.min_apriori_slack);
  j["monitors"] = m;
  j["checks"] = checks_json(rep);
  j["config"] = to_json(cfg);
  return j;
}

int run_simulate(const SimulationConfig& cfg, const fs::path& out_dir) {
  const RunResult result = run_model(cfg);
  fs::create_directories(out_dir);
  write_file(out_dir / "trajectory.csv", trajectory_csv(result.report));
  if (cfg.output.snapshot_every > 0) {
    const auto& traj = result.trajectory;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      if (traj.steps[i] % cfg.output.snapshot_every != 0) continue;
      write_file(out_dir / ("fields_" + std::to_string(traj.steps[i]) + ".csv"),
                 fields_csv(traj.states[i], cfg.model));
    }
  }
  write_file(out_dir / "summary.json", summary_json(cfg, result).dump(2) + "\n");
  return result.trajectory.termination.completed ? kExitCompleted : kExitBlowup;
}

int run_simulate_file(const fs::path& config_path, const fs::path& out_dir, std::ostream& err) {
  SimulationConfig cfg;
  try {
    cfg = parse_config(read_file(config_path));
    for (const auto& w : cfg.model.validate()) err << "warning: " << w << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return run_simulate(cfg, out_dir);
}

int run_sweep(const SimulationConfig& cfg, const fs::path& out_dir, unsigned jobs, std::ostream& err) {
  if (!cfg.sweep) {
    err << "config error: sweep requires a \"sweep\" section\n";
    return kExitConfigError;
  }
  const SweepGrid& g = *cfg.sweep;
  auto axis = [](const std::vector<double>& v, double base) { return v.empty() ? std::vector<double>{base} : v; };
  const auto s_axis = axis(g.s, cfg.model.s);
  const auto a_axis = axis(g.a, cfg.model.a);
  const auto k_axis = axis(g.kappa, cfg.model.kappa);
  const auto al_axis = axis(g.alpha, cfg.model.alpha);
  if (g.s.empty() && g.a.empty() && g.kappa.empty() && g.alpha.empty()) {
    err << "config error: sweep grid is empty\n";
    return kExitConfigError;
  }

  std::vector<ModelParams> cells;
  for (double s : s_axis)
    for (double a : a_axis)
      for (double kappa : k_axis)
        for (double alpha : al_axis) cells.push_back({a, kappa, alpha, s});

  std::vector<std::string> lines(cells.size());
  std::vector<char> failed(cells.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SimulationConfig c = cfg;
      c.model = cells[i];
      c.sweep.reset();
      json row;
      row["params"] = {{"s", c.model.s}, {"a", c.model.a}, {"kappa", c.model.kappa}, {"alpha", c.model.alpha}};
      try {
        const RunResult r = run_model(c);
        const auto& term = r.trajectory.termination;
        row["status"] = term.completed ? "completed" : "blowup";
        row["reason"] = to_string(term.reason);
        row["t_star"] = term.completed ? json(nullptr) : json(term.time);
        row["max_metric_drift"] = number_or_null(r.report.max_metric_drift);
        row["max_sup_ux"] = number_or_null(r.report.max_sup_ux);
        row["error"] = nullptr;
      } catch (const std::exception& e) {
        failed[i] = 1;
        row["status"] = "error";
        row["reason"] = nullptr;
        row["t_star"] = nullptr;
        row["max_metric_drift"] = nullptr;
        row["max_sup_ux"] = nullptr;
        row["error"] = e.what();
      }
      lines[i] = row.dump();
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  fs::create_directories(out_dir);
  std::string text;
  for (const auto& l : lines) text += l + '\n';
  write_file(out_dir / "sweep.jsonl", text);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (failed[i]) {
      err << "sweep cell " << i << " failed\n";
      return kExitConfigError;
    }
  }
  return kExitCompleted;
}

int run_sweep_file(const fs::path& config_path, const fs::path& out_dir, unsigned jobs, std::ostream& err) {
  SimulationConfig cfg;
  try {
    cfg = parse_config(read_file(config_path));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return run_sweep(cfg, out_dir, jobs, err);
}

}  // namespace chflow
