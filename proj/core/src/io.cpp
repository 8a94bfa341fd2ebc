#include "nehari/io.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nehari {

using nlohmann::json;

ConfigError::ConfigError(const std::string& message, std::optional<int> line,
                         std::string field)
    : std::runtime_error(message), line_(line), field_(std::move(field)) {}

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("config field " + path + ": " + what, std::nullopt, path);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) field_error(path.empty() ? "/" : path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) {
      std::string list;
      for (const char* k : allowed) list += std::string(list.empty() ? "" : ", ") + k;
      field_error(path + "/" + item.key(), "unknown key (allowed: " + list + ")");
    }
  }
}

double number_at(const json& obj, const std::string& path, const char* key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) field_error(path + "/" + key, "expected a number");
  return v.get<double>();
}

int int_at(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) field_error(path + "/" + key, "expected an integer");
  return v.get<int>();
}

bool bool_at(const json& obj, const std::string& path, const char* key,
             bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) field_error(path + "/" + key, "expected true or false");
  return v.get<bool>();
}

std::uint64_t seed_value(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    field_error(path, "expected a non-negative integer seed");
  }
  return v.get<std::uint64_t>();
}

ParamMap param_map(const json& obj, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object of numbers");
  ParamMap out;
  for (const auto& item : obj.items()) {
    if (!item.value().is_number()) {
      field_error(path + "/" + item.key(), "expected a number");
    }
    out[item.key()] = item.value().get<double>();
  }
  return out;
}

PotentialSpec parse_potential(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "omega", "scale", "w", "delta", "xc", "yc", "samples"});
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    field_error(path + "/kind", "expected a potential kind string");
  }
  const auto kind = parse_potential_kind(j.at("kind").get<std::string>());
  if (!kind) {
    field_error(path + "/kind",
                "unknown potential kind (constant, harmonic, harmonic_plus_one, "
                "gaussian_stirrer, custom)");
  }
  switch (*kind) {
    case PotentialSpec::Kind::constant:
      return PotentialSpec::constant(number_at(j, path, "omega", 0.0));
    case PotentialSpec::Kind::harmonic:
      return PotentialSpec::harmonic(number_at(j, path, "scale", 1.0));
    case PotentialSpec::Kind::harmonic_plus_one:
      return PotentialSpec::harmonic_plus_one(number_at(j, path, "scale", 1.0));
    case PotentialSpec::Kind::gaussian_stirrer: {
      const double delta = number_at(j, path, "delta", 1.0);
      if (!(delta > 0.0)) field_error(path + "/delta", "must be positive");
      return PotentialSpec::gaussian_stirrer(number_at(j, path, "w", 0.0), delta,
                                             number_at(j, path, "xc", 0.0),
                                             number_at(j, path, "yc", 0.0));
    }
    case PotentialSpec::Kind::custom: {
      if (!j.contains("samples") || !j.at("samples").is_array()) {
        field_error(path + "/samples", "expected an array of nodal values");
      }
      std::vector<double> s;
      for (const auto& v : j.at("samples")) {
        if (!v.is_number()) field_error(path + "/samples", "expected numbers");
        s.push_back(v.get<double>());
      }
      return PotentialSpec::custom(std::move(s));
    }
  }
  field_error(path, "unreachable");
}

ScenarioSpec parse_inline(const json& j, const std::string& path) {
  check_keys(j, path, {"name", "m", "eps", "potentials", "coupling", "initial"});
  ScenarioSpec s;
  s.name = j.contains("name") ? j.at("name").get<std::string>() : "inline";
  s.m = int_at(j, path, "m", 0);
  if (s.m < 1) field_error(path + "/m", "must be a positive integer");

  if (!j.contains("eps") || !j.at("eps").is_array() ||
      static_cast<int>(j.at("eps").size()) != s.m) {
    field_error(path + "/eps", "expected an array of m numbers");
  }
  for (std::size_t i = 0; i < j.at("eps").size(); ++i) {
    const json& e = j.at("eps")[i];
    if (!e.is_number() || !(e.get<double>() > 0.0)) {
      field_error(path + "/eps/" + std::to_string(i), "must be a positive number");
    }
    s.eps.push_back(e.get<double>());
  }

  if (!j.contains("potentials") || !j.at("potentials").is_array() ||
      static_cast<int>(j.at("potentials").size()) != s.m) {
    field_error(path + "/potentials", "expected an array of m potential objects");
  }
  for (std::size_t i = 0; i < j.at("potentials").size(); ++i) {
    s.potentials.push_back(
        parse_potential(j.at("potentials")[i], path + "/potentials/" + std::to_string(i)));
  }

  const std::string cpath = path + "/coupling";
  if (!j.contains("coupling") || !j.at("coupling").is_array() ||
      static_cast<int>(j.at("coupling").size()) != s.m) {
    field_error(cpath, "expected an m x m array of arrays");
  }
  for (int r = 0; r < s.m; ++r) {
    const json& row = j.at("coupling")[r];
    if (!row.is_array() || static_cast<int>(row.size()) != s.m) {
      field_error(cpath + "/" + std::to_string(r), "expected a row of m numbers");
    }
    for (int c = 0; c < s.m; ++c) {
      if (!row[c].is_number()) {
        field_error(cpath + "/" + std::to_string(r) + "/" + std::to_string(c),
                    "expected a number");
      }
      s.coupling.push_back(row[c].get<double>());
    }
  }
  for (int r = 0; r < s.m; ++r) {
    for (int c = 0; c < r; ++c) {
      if (s.coupling[r * s.m + c] != s.coupling[c * s.m + r]) {
        field_error(cpath + "/" + std::to_string(r) + "/" + std::to_string(c),
                    "coupling matrix must be symmetric");
      }
    }
  }

  if (j.contains("initial")) {
    const json& init = j.at("initial");
    const std::string ipath = path + "/initial";
    check_keys(init, ipath, {"kind", "seed"});
    const std::string kind = init.value("kind", std::string("gaussian"));
    if (kind == "gaussian") {
      s.initial.kind = InitialGuessSpec::Kind::gaussian;
    } else if (kind == "randomized") {
      s.initial.kind = InitialGuessSpec::Kind::randomized;
    } else {
      field_error(ipath + "/kind", "expected \"gaussian\" or \"randomized\"");
    }
    if (init.contains("seed")) s.initial.seed = seed_value(init.at("seed"), ipath + "/seed");
  }
  return s;
}

void parse_scenario(const json& j, RunConfig& cfg) {
  const std::string path = "/scenario";
  check_keys(j, path, {"name", "params", "inline"});
  if (j.contains("inline")) {
    if (j.contains("name") || j.contains("params")) {
      field_error(path, "give either \"inline\" or \"name\"/\"params\", not both");
    }
    cfg.scenario_name = "inline";
    cfg.scenario = parse_inline(j.at("inline"), path + "/inline");
    return;
  }
  if (!j.contains("name") || !j.at("name").is_string()) {
    field_error(path + "/name", "expected a scenario builder name");
  }
  cfg.scenario_name = j.at("name").get<std::string>();
  if (j.contains("params")) cfg.scenario_params = param_map(j.at("params"), path + "/params");
  try {
    const ScenarioBuilder& b = find_builder(cfg.scenario_name);
    cfg.scenario = build_named(b.name, cfg.scenario_params);
    ParamMap full = b.defaults;
    for (const auto& [k, v] : cfg.scenario_params) full[k] = v;
    cfg.scenario_params = full;
  } catch (const std::invalid_argument& e) {
    const bool bad_name = std::string(e.what()).rfind("unknown scenario", 0) == 0;
    field_error(bad_name ? path + "/name" : path + "/params", e.what());
  }
}

void parse_solver(const json& j, SolverOptions& o) {
  const std::string path = "/solver";
  check_keys(j, path,
             {"algorithm", "alpha", "alpha0", "sigma", "varrho", "beta", "tol",
              "max_iter", "max_backtracks", "seed", "restart_momentum",
              "fixed_momentum", "energy_blowup", "residual_blowup"});
  if (j.contains("algorithm")) {
    const json& a = j.at("algorithm");
    auto parsed = a.is_string() ? parse_algorithm(a.get<std::string>()) : std::nullopt;
    if (!parsed) field_error(path + "/algorithm", "expected one of RSD, RAG, NMRAG");
    o.algorithm = *parsed;
  }
  auto positive = [&](const char* key, double& slot) {
    slot = number_at(j, path, key, slot);
    if (!(slot > 0.0) || !std::isfinite(slot)) field_error(path + "/" + key, "must be positive");
  };
  auto unit = [&](const char* key, double& slot) {
    slot = number_at(j, path, key, slot);
    if (!(slot > 0.0 && slot < 1.0)) field_error(path + "/" + key, "must lie in (0,1)");
  };
  positive("alpha", o.alpha);
  positive("alpha0", o.alpha0);
  unit("sigma", o.sigma);
  unit("varrho", o.varrho);
  unit("beta", o.beta);
  positive("tol", o.tol);
  positive("energy_blowup", o.energy_blowup);
  positive("residual_blowup", o.residual_blowup);
  o.max_iter = int_at(j, path, "max_iter", o.max_iter);
  if (o.max_iter < 1) field_error(path + "/max_iter", "must be >= 1");
  o.max_backtracks = int_at(j, path, "max_backtracks", o.max_backtracks);
  if (o.max_backtracks < 1) field_error(path + "/max_backtracks", "must be >= 1");
  if (j.contains("seed") && !j.at("seed").is_null()) {
    o.rng_seed = seed_value(j.at("seed"), path + "/seed");
  }
  o.restart_momentum = bool_at(j, path, "restart_momentum", o.restart_momentum);
  if (j.contains("fixed_momentum") && !j.at("fixed_momentum").is_null()) {
    o.fixed_momentum = number_at(j, path, "fixed_momentum", 0.0);
  }
}

void parse_sweep(const json& j, RunConfig& cfg) {
  const std::string path = "/sweep";
  check_keys(j, path, {"points", "axis", "seeds", "classify_threshold", "threads"});
  SweepConfig& s = cfg.sweep;
  if (j.contains("points")) {
    if (!j.at("points").is_array()) field_error(path + "/points", "expected an array");
    for (std::size_t i = 0; i < j.at("points").size(); ++i) {
      s.points.push_back(param_map(j.at("points")[i], path + "/points/" + std::to_string(i)));
    }
  }
  if (j.contains("axis")) {
    const json& a = j.at("axis");
    check_keys(a, path + "/axis", {"name", "values"});
    if (!a.contains("name") || !a.at("name").is_string()) {
      field_error(path + "/axis/name", "expected a parameter name");
    }
    if (!a.contains("values") || !a.at("values").is_array()) {
      field_error(path + "/axis/values", "expected an array of numbers");
    }
    const std::string name = a.at("name").get<std::string>();
    for (const auto& v : a.at("values")) {
      if (!v.is_number()) field_error(path + "/axis/values", "expected numbers");
      s.points.push_back({{name, v.get<double>()}});
    }
  }
  if (j.contains("seeds")) {
    if (!j.at("seeds").is_array()) field_error(path + "/seeds", "expected an array");
    for (std::size_t i = 0; i < j.at("seeds").size(); ++i) {
      s.seeds.push_back(seed_value(j.at("seeds")[i], path + "/seeds/" + std::to_string(i)));
    }
  }
  s.classify_threshold = number_at(j, path, "classify_threshold", s.classify_threshold);
  if (!(s.classify_threshold > 0.0 && s.classify_threshold < 1.0)) {
    field_error(path + "/classify_threshold", "must lie in (0,1)");
  }
  s.threads = int_at(j, path, "threads", s.threads);
  if (s.threads < 0) field_error(path + "/threads", "must be >= 0");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const int line =
        1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ConfigError("config syntax error at line " + std::to_string(line) + ": " +
                          e.what(),
                      line, "");
  }
  check_keys(root, "", {"scenario", "grid", "solver", "output", "compat", "compare",
                        "sweep"});
  if (!root.contains("scenario")) field_error("/scenario", "required");

  RunConfig cfg;
  parse_scenario(root.at("scenario"), cfg);

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    check_keys(g, "/grid", {"L", "M"});
    cfg.scenario.half_width = number_at(g, "/grid", "L", cfg.scenario.half_width);
    if (!(cfg.scenario.half_width > 0.0)) field_error("/grid/L", "must be positive");
    cfg.scenario.subdivisions = int_at(g, "/grid", "M", cfg.scenario.subdivisions);
    if (cfg.scenario.subdivisions < 4 || cfg.scenario.subdivisions % 2 != 0) {
      field_error("/grid/M", "must be an even integer >= 4");
    }
  }
  if (root.contains("solver")) parse_solver(root.at("solver"), cfg.solver);
  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "/output", {"dir", "history", "fields", "metadata"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) field_error("/output/dir", "expected a path string");
      cfg.output_dir = o.at("dir").get<std::string>();
    }
    cfg.outputs.history = bool_at(o, "/output", "history", true);
    cfg.outputs.fields = bool_at(o, "/output", "fields", true);
    cfg.outputs.metadata = bool_at(o, "/output", "metadata", true);
  }
  if (root.contains("compat")) {
    const json& c = root.at("compat");
    check_keys(c, "/compat", {"unscaled_ih"});
    cfg.compat_unscaled_ih = bool_at(c, "/compat", "unscaled_ih", false);
  }
  if (root.contains("compare")) {
    const json& c = root.at("compare");
    check_keys(c, "/compare", {"algorithms"});
    if (c.contains("algorithms")) {
      const json& list = c.at("algorithms");
      if (!list.is_array() || list.empty()) {
        field_error("/compare/algorithms", "expected a non-empty array");
      }
      cfg.compare_algorithms.clear();
      for (std::size_t i = 0; i < list.size(); ++i) {
        auto a = list[i].is_string() ? parse_algorithm(list[i].get<std::string>())
                                     : std::nullopt;
        if (!a) {
          field_error("/compare/algorithms/" + std::to_string(i),
                      "expected one of RSD, RAG, NMRAG");
        }
        cfg.compare_algorithms.push_back(*a);
      }
    }
  }
  if (root.contains("sweep")) parse_sweep(root.at("sweep"), cfg);

  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string(), std::nullopt, "");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const RunConfig& cfg) {
  try {
    validate_options(cfg.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver options: ") + e.what(), std::nullopt, "/solver");
  }
  try {
    build_problem(cfg.scenario, cfg.scaling());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what(), std::nullopt, "/scenario");
  }
}

namespace {

json potential_json(const PotentialSpec& a) {
  json j{{"kind", to_string(a.kind)}};
  switch (a.kind) {
    case PotentialSpec::Kind::constant: j["omega"] = a.omega; break;
    case PotentialSpec::Kind::harmonic:
    case PotentialSpec::Kind::harmonic_plus_one: j["scale"] = a.scale; break;
    case PotentialSpec::Kind::gaussian_stirrer:
      j["w"] = a.height;
      j["delta"] = a.width;
      j["xc"] = a.center_x;
      j["yc"] = a.center_y;
      break;
    case PotentialSpec::Kind::custom: j["samples"] = a.samples; break;
  }
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  json root;
  if (cfg.scenario_name == "inline") {
    const ScenarioSpec& s = cfg.scenario;
    json inl{{"name", s.name}, {"m", s.m}, {"eps", s.eps}};
    inl["potentials"] = json::array();
    for (const auto& a : s.potentials) inl["potentials"].push_back(potential_json(a));
    json g = json::array();
    for (int r = 0; r < s.m; ++r) {
      g.push_back(std::vector<double>(s.coupling.begin() + r * s.m,
                                      s.coupling.begin() + (r + 1) * s.m));
    }
    inl["coupling"] = g;
    inl["initial"] = {
        {"kind", s.initial.kind == InitialGuessSpec::Kind::randomized ? "randomized"
                                                                      : "gaussian"},
        {"seed", s.initial.seed}};
    root["scenario"] = {{"inline", inl}};
  } else {
    root["scenario"] = {{"name", cfg.scenario_name}, {"params", cfg.scenario_params}};
  }
  root["grid"] = {{"L", cfg.scenario.half_width}, {"M", cfg.scenario.subdivisions}};
  const SolverOptions& o = cfg.solver;
  root["solver"] = {{"algorithm", std::string(to_string(o.algorithm))},
                    {"alpha", o.alpha},
                    {"alpha0", o.alpha0},
                    {"sigma", o.sigma},
                    {"varrho", o.varrho},
                    {"beta", o.beta},
                    {"tol", o.tol},
                    {"max_iter", o.max_iter},
                    {"max_backtracks", o.max_backtracks},
                    {"seed", o.rng_seed ? json(*o.rng_seed) : json(nullptr)},
                    {"restart_momentum", o.restart_momentum},
                    {"fixed_momentum",
                     o.fixed_momentum ? json(*o.fixed_momentum) : json(nullptr)},
                    {"energy_blowup", o.energy_blowup},
                    {"residual_blowup", o.residual_blowup}};
  root["output"] = {{"dir", cfg.output_dir.string()},
                    {"history", cfg.outputs.history},
                    {"fields", cfg.outputs.fields},
                    {"metadata", cfg.outputs.metadata}};
  root["compat"] = {{"unscaled_ih", cfg.compat_unscaled_ih}};
  json algs = json::array();
  for (Algorithm a : cfg.compare_algorithms) algs.push_back(std::string(to_string(a)));
  root["compare"] = {{"algorithms", algs}};
  json points = json::array();
  for (const auto& p : cfg.sweep.points) points.push_back(p);
  root["sweep"] = {{"points", points},
                   {"seeds", cfg.sweep.seeds},
                   {"classify_threshold", cfg.sweep.classify_threshold},
                   {"threads", cfg.sweep.threads}};
  return root.dump(2);
}

Field config_initial_guess(const RunConfig& cfg, const Problem& p) {
  if (cfg.solver.rng_seed) return randomized_initial(p, *cfg.solver.rng_seed);
  return initial_guess(cfg.scenario, p);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

const char* const kHistoryHeader =
    "n,energy,residual,step_kind,alpha_used,backtracks,C,t,grad_norm_sq,armijo_alpha";

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double_cell(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::runtime_error("bad number '" + s + "' in " + where);
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

StepKind parse_step_kind(const std::string& s) {
  for (StepKind k : {StepKind::initial, StepKind::rsd, StepKind::rag_extrapolated,
                     StepKind::armijo_fallback}) {
    if (to_string(k) == s) return k;
  }
  throw std::runtime_error("unknown step kind '" + s + "'");
}

}  // namespace

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<IterationRecord>& history,
                       const std::vector<std::string>& comments) {
  std::ofstream out = open_out(path);
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# n: iteration index (0 = initial state)\n"
         "# energy: E_h(u_n)\n"
         "# residual: max_i sup-norm of the discrete equation residual\n"
         "# step_kind: initial | rsd | rag_extrapolated | armijo_fallback\n"
         "# alpha_used: step length of the accepted update\n"
         "# backtracks: Armijo reductions (nmRAG only)\n"
         "# C: nonmonotone reference value (nmRAG only)\n"
         "# t: momentum coefficient (accelerated schemes)\n"
         "# grad_norm_sq: squared H-norm of the Riemannian gradient at u_{n-1} (nmRAG)\n"
         "# armijo_alpha: step accepted by the Armijo search at u_{n-1} (nmRAG)\n";
  out << kHistoryHeader << '\n';
  for (const auto& r : history) {
    out << r.n << ',' << format_double(r.energy) << ',' << format_double(r.residual)
        << ',' << to_string(r.step_kind) << ',' << format_double(r.alpha_used) << ','
        << r.backtracks << ',' << optional_cell(r.C) << ',' << optional_cell(r.t)
        << ',' << optional_cell(r.grad_norm_sq) << ',' << optional_cell(r.armijo_alpha)
        << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<IterationRecord> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<IterationRecord> out;
  std::string line;
  bool header_seen = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kHistoryHeader) {
        throw std::runtime_error("unexpected history header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto cells = split_csv_line(line);
    if (cells.size() != 10) throw std::runtime_error("expected 10 columns at " + where);
    IterationRecord r;
    r.n = std::stoi(cells[0]);
    r.energy = parse_double_cell(cells[1], where);
    r.residual = parse_double_cell(cells[2], where);
    r.step_kind = parse_step_kind(cells[3]);
    r.alpha_used = parse_double_cell(cells[4], where);
    r.backtracks = std::stoi(cells[5]);
    auto opt = [&](const std::string& c) -> std::optional<double> {
      if (c.empty()) return std::nullopt;
      return parse_double_cell(c, where);
    };
    r.C = opt(cells[6]);
    r.t = opt(cells[7]);
    r.grad_norm_sq = opt(cells[8]);
    r.armijo_alpha = opt(cells[9]);
    out.push_back(r);
  }
  return out;
}

void write_field(const std::filesystem::path& dir, const Field& u) {
  static_assert(std::endian::native == std::endian::little,
                "field dumps assume a little-endian host");
  std::filesystem::create_directories(dir);
  json files = json::array();
  for (int i = 0; i < u.components(); ++i) {
    const std::string name = "field_" + std::to_string(i) + ".bin";
    std::ofstream out = open_out(dir / name, true);
    const auto c = u.component(i);
    out.write(reinterpret_cast<const char*>(c.data()),
              static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
    files.push_back(name);
  }
  const Grid& g = u.grid();
  json meta{{"components", u.components()},
            {"shape", {g.nodes_per_axis(), g.nodes_per_axis()}},
            {"dtype", "float64"},
            {"byte_order", "little"},
            {"layout", "row-major, first index x (slow), second index y"},
            {"L", g.half_width()},
            {"M", g.subdivisions()},
            {"h", g.mesh()},
            {"first_node", g.coordinate(1)},
            {"files", files}};
  std::ofstream out = open_out(dir / "field_meta.json");
  out << meta.dump(2) << '\n';
}

Field read_field(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "field_meta.json");
  if (!meta_in) throw std::runtime_error("missing field_meta.json in " + dir.string());
  const json meta = json::parse(meta_in);
  const Grid grid(meta.at("L").get<double>(), meta.at("M").get<int>());
  const int m = meta.at("components").get<int>();
  Field u(grid, m);
  for (int i = 0; i < m; ++i) {
    const auto path = dir / meta.at("files").at(i).get<std::string>();
    std::ifstream in(path, std::ios::binary);
    auto c = u.component(i);
    in.read(reinterpret_cast<char*>(c.data()),
            static_cast<std::streamsize>(c.size() * sizeof(double)));
    if (!in || in.peek() != std::char_traits<char>::eof()) {
      throw std::runtime_error("size mismatch in " + path.string());
    }
  }
  return u;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
  std::set<std::string> keys;
  std::size_t m = 0;
  for (const auto& r : rows) {
    for (const auto& kv : r.params) keys.insert(kv.first);
    m = std::max(m, r.component_max.size());
  }
  std::ofstream out = open_out(path);
  out << "row";
  for (const auto& k : keys) out << ',' << k;
  out << ",seed,ok,status,converged,iterations,energy,residual,classification";
  for (std::size_t i = 0; i < m; ++i) out << ",max_u" << i;
  out << ",symmetry_defect,error\n";
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const SweepRow& r = rows[n];
    out << n;
    for (const auto& k : keys) {
      out << ',';
      if (auto it = r.params.find(k); it != r.params.end()) out << format_double(it->second);
    }
    out << ',' << (r.seed ? std::to_string(*r.seed) : std::string()) << ','
        << (r.ok ? "true" : "false") << ',';
    if (r.ok) {
      out << to_string(r.status) << ',' << (r.converged ? "true" : "false") << ','
          << r.iterations << ',' << format_double(r.energy) << ','
          << format_double(r.residual) << ','
          << to_string(r.classification.overall);
    } else {
      out << "failed,false,,,,";
    }
    for (std::size_t i = 0; i < m; ++i) {
      out << ',';
      if (i < r.component_max.size()) out << format_double(r.component_max[i]);
    }
    out << ',' << (r.ok ? format_double(r.symmetry_defect) : std::string()) << ','
        << csv_quote(r.error) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace nehari
