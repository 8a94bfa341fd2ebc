#include "nehari/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include <fftw3.h>
#include <json.hpp>

#include "nehari/errors.hpp"
#include "nehari/model.hpp"

namespace nehari {

using nlohmann::json;

std::string version() { return "0.1.0"; }

SolveResult solve_config(const RunConfig& config) {
  const Problem p = build_problem(config.scenario, config.scaling());
  return run(p, config_initial_guess(config, p), config.solver);
}

namespace {

json build_info() {
  return {{"nehari", version()},
          {"fftw", std::string(fftw_version)},
#if defined(__clang__)
          {"compiler", std::string("clang ") + __clang_version__},
#elif defined(__GNUC__)
          {"compiler", std::string("gcc ") + __VERSION__},
#else
          {"compiler", "unknown"},
#endif
          {"cxx_standard", static_cast<long>(__cplusplus)}};
}

std::vector<std::string> history_comments(const RunConfig& config, Algorithm a) {
  return {"nehari " + version() + " history",
          "scenario: " + config.scenario_name + " (" + config.scenario.name + ")",
          "algorithm: " + std::string(to_string(a)) +
              ", alpha = " + format_double(config.solver.alpha) +
              ", tol = " + format_double(config.solver.tol),
          "grid: L = " + format_double(config.scenario.half_width) +
              ", M = " + std::to_string(config.scenario.subdivisions)};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int solve_command(const RunConfig& config, std::ostream& log) {
  std::optional<SolveResult> result;
  try {
    validate_config(config);
    result = solve_config(config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  const SolveResult& r = *result;

  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  if (config.outputs.history) {
    write_history_csv(dir / "history.csv", r.history,
                      history_comments(config, config.solver.algorithm));
  }
  if (config.outputs.fields) write_field(dir, r.final);
  if (config.outputs.metadata) {
    const IterationRecord& last = r.history.back();
    json meta{{"config", json::parse(config_to_json(config))},
              {"build", build_info()},
              {"status", std::string(to_string(r.status))},
              {"converged", r.converged},
              {"diverged", r.diverged},
              {"iterations", r.iterations},
              {"wall_time_seconds", r.wall_time},
              {"initial_energy", r.history.front().energy},
              {"initial_residual", r.history.front().residual},
              {"final_energy", last.energy},
              {"final_residual", last.residual},
              {"message", r.message}};
    json maxima = json::array();
    for (int i = 0; i < r.final.components(); ++i) {
      maxima.push_back(r.final.component_max_abs(i));
    }
    meta["component_max"] = maxima;
    write_json(dir / "run_meta.json", meta);
  }

  log << to_string(config.solver.algorithm) << ": " << to_string(r.status)
      << " after " << r.iterations << " iterations, E = "
      << format_double(r.history.back().energy)
      << ", r = " << format_double(r.history.back().residual) << '\n';
  if (!r.message.empty()) log << "  " << r.message << '\n';
  return r.status == SolveStatus::line_search_failed ? 1 : 0;
}

std::vector<CompareRow> compare_algorithms(const RunConfig& config) {
  const Problem p = build_problem(config.scenario, config.scaling());
  const Field u0 = config_initial_guess(config, p);
  std::vector<CompareRow> rows;
  for (Algorithm a : config.compare_algorithms) {
    CompareRow row;
    row.algorithm = a;
    try {
      SolverOptions opts = config.solver;
      opts.algorithm = a;
      SolveResult r = run(p, u0, opts);
      row.ok = r.status != SolveStatus::line_search_failed;
      row.error = r.message;
      row.status = r.status;
      row.iterations = r.iterations;
      row.wall_time = r.wall_time;
      row.final_residual = r.history.back().residual;
      row.final_energy = r.history.back().energy;
      row.history = std::move(r.history);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int compare_command(const RunConfig& config, std::ostream& log) {
  std::vector<CompareRow> rows;
  try {
    validate_config(config);
    rows = compare_algorithms(config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);

  std::ofstream table(dir / "compare.csv", std::ios::trunc);
  table << "algorithm,ok,status,iterations,wall_time_seconds,final_residual,"
           "final_energy\n";
  std::size_t longest = 0;
  for (const auto& r : rows) {
    table << to_string(r.algorithm) << ',' << (r.ok ? "true" : "false") << ','
          << to_string(r.status) << ',' << r.iterations << ','
          << format_double(r.wall_time) << ',' << format_double(r.final_residual)
          << ',' << format_double(r.final_energy) << '\n';
    longest = std::max(longest, r.history.size());
    if (!r.history.empty() && config.outputs.history) {
      write_history_csv(dir / ("history_" + std::string(to_string(r.algorithm)) + ".csv"),
                        r.history, history_comments(config, r.algorithm));
    }
    log << to_string(r.algorithm) << ": " << to_string(r.status) << ", "
        << r.iterations << " iterations, r = " << format_double(r.final_residual)
        << ", " << format_double(r.wall_time) << " s\n";
    if (!r.ok) log << "  " << r.error << '\n';
  }

  std::ofstream residuals(dir / "residuals.csv", std::ios::trunc);
  residuals << "# residual r_n per algorithm; empty cells after a run stopped\n";
  residuals << 'n';
  for (const auto& r : rows) residuals << ',' << to_string(r.algorithm);
  residuals << '\n';
  for (std::size_t n = 0; n < longest; ++n) {
    residuals << n;
    for (const auto& r : rows) {
      residuals << ',';
      if (n < r.history.size()) residuals << format_double(r.history[n].residual);
    }
    residuals << '\n';
  }
  if (config.outputs.metadata) {
    write_json(dir / "run_meta.json",
               {{"config", json::parse(config_to_json(config))},
                {"build", build_info()},
                {"command", "compare"}});
  }
  return 0;
}

std::vector<SweepRow> run_sweep(const RunConfig& config) {
  std::vector<SweepPoint> points;
  std::vector<std::optional<std::uint64_t>> seeds;
  for (auto s : config.sweep.seeds) seeds.emplace_back(s);
  if (seeds.empty()) seeds.push_back(config.solver.rng_seed);
  for (const ParamMap& row : config.sweep.points) {
    ParamMap params = config.scenario_params;
    for (const auto& [k, v] : row) params[k] = v;
    for (const auto& seed : seeds) points.push_back(SweepPoint{params, seed});
  }

  SweepSettings settings;
  settings.solver = config.solver;
  settings.classify_threshold = config.sweep.classify_threshold;
  settings.scaling = config.scaling();
  settings.threads = config.sweep.threads;
  settings.half_width = config.scenario.half_width;
  settings.subdivisions = config.scenario.subdivisions;

  std::function<ScenarioSpec(const ParamMap&)> builder;
  if (config.scenario_name == "inline") {
    builder = [spec = config.scenario](const ParamMap& params) {
      if (!params.empty()) {
        throw std::invalid_argument("an inline scenario takes no sweep parameters");
      }
      return spec;
    };
  } else {
    builder = [name = config.scenario_name](const ParamMap& params) {
      return build_named(name, params);
    };
  }
  return sweep_coupling(builder, points, settings);
}

int sweep_command(const RunConfig& config, std::ostream& log) {
  std::vector<SweepRow> rows;
  try {
    validate_options(config.solver);
    rows = run_sweep(config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
  write_sweep_csv(config.output_dir / "sweep.csv", rows);
  if (config.outputs.metadata) {
    write_json(config.output_dir / "run_meta.json",
               {{"config", json::parse(config_to_json(config))},
                {"build", build_info()},
                {"command", "sweep"},
                {"rows", rows.size()}});
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.ok ? 0 : 1;
  log << rows.size() << " sweep rows, " << failed << " failed\n";
  return 0;
}

std::string to_string(PropertyCheck::Status s) {
  switch (s) {
    case PropertyCheck::Status::pass: return "pass";
    case PropertyCheck::Status::fail: return "fail";
    case PropertyCheck::Status::skipped: return "skipped";
  }
  return "?";
}

int verify_command(const VerifyOptions& options, std::ostream& out) {
  const auto checks = run_verification(options);
  json report = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    report.push_back({{"property", c.name},
                      {"status", to_string(c.status)},
                      {"measured", c.measured},
                      {"tolerance", c.tolerance},
                      {"note", c.note}});
    ok = ok && c.status != PropertyCheck::Status::fail;
  }
  out << json{{"passed", ok}, {"properties", report}}.dump(2) << '\n';
  return ok ? 0 : 1;
}

}  // namespace nehari
