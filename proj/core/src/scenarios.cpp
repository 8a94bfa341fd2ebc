#include "nehari/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nehari/model.hpp"

namespace nehari {

PotentialSpec PotentialSpec::constant(double omega) {
  PotentialSpec s;
  s.kind = Kind::constant;
  s.omega = omega;
  return s;
}

PotentialSpec PotentialSpec::harmonic(double scale) {
  PotentialSpec s;
  s.kind = Kind::harmonic;
  s.scale = scale;
  return s;
}

PotentialSpec PotentialSpec::harmonic_plus_one(double scale) {
  PotentialSpec s;
  s.kind = Kind::harmonic_plus_one;
  s.scale = scale;
  return s;
}

PotentialSpec PotentialSpec::gaussian_stirrer(double w, double delta, double xc,
                                              double yc) {
  PotentialSpec s;
  s.kind = Kind::gaussian_stirrer;
  s.height = w;
  s.width = delta;
  s.center_x = xc;
  s.center_y = yc;
  return s;
}

PotentialSpec PotentialSpec::custom(std::vector<double> samples) {
  PotentialSpec s;
  s.kind = Kind::custom;
  s.samples = std::move(samples);
  return s;
}

ScalarField PotentialSpec::sample(const Grid& grid) const {
  switch (kind) {
    case Kind::constant:
      return ScalarField::sample(grid, [&](double, double) { return omega; });
    case Kind::harmonic:
      return ScalarField::sample(
          grid, [&](double x, double y) { return scale * (x * x + y * y); });
    case Kind::harmonic_plus_one:
      return ScalarField::sample(grid, [&](double x, double y) {
        return scale * (x * x + y * y + 1.0);
      });
    case Kind::gaussian_stirrer:
      return ScalarField::sample(grid, [&](double x, double y) {
        const double dx = x - center_x;
        const double dy = y - center_y;
        return x * x + y * y + height * std::exp(-width * (dx * dx + dy * dy));
      });
    case Kind::custom:
      return ScalarField(grid, samples);
  }
  throw std::logic_error("unknown potential kind");
}

std::string to_string(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::constant: return "constant";
    case PotentialSpec::Kind::harmonic: return "harmonic";
    case PotentialSpec::Kind::harmonic_plus_one: return "harmonic_plus_one";
    case PotentialSpec::Kind::gaussian_stirrer: return "gaussian_stirrer";
    case PotentialSpec::Kind::custom: return "custom";
  }
  return "?";
}

std::optional<PotentialSpec::Kind> parse_potential_kind(const std::string& name) {
  using K = PotentialSpec::Kind;
  for (K k : {K::constant, K::harmonic, K::harmonic_plus_one, K::gaussian_stirrer,
              K::custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Problem build_problem(const ScenarioSpec& spec, InteractionScaling scaling) {
  const int m = spec.m;
  if (m < 1) throw std::invalid_argument("scenario needs at least one component");
  if (static_cast<int>(spec.eps.size()) != m ||
      static_cast<int>(spec.potentials.size()) != m) {
    throw std::invalid_argument("scenario '" + spec.name +
                                "': eps and potentials must have m entries");
  }
  Grid grid(spec.half_width, spec.subdivisions);
  std::vector<ScalarField> potentials;
  potentials.reserve(m);
  for (const auto& a : spec.potentials) potentials.push_back(a.sample(grid));
  Problem p(grid, spec.eps, std::move(potentials),
            CouplingMatrix(m, spec.coupling), scaling);
  if (auto v = validate_problem(p)) {
    throw std::invalid_argument("scenario '" + spec.name + "' is inadmissible (" +
                                v->clause + "): " + v->detail);
  }
  return p;
}

namespace {

double gaussian_profile(double x, double y) {
  return std::exp(-16.0 * (x * x + y * y));
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ counter);
  // 53 random bits shifted off zero: strictly inside (0, 1).
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

Field gaussian_initial(const Problem& p) {
  const ScalarField g = ScalarField::sample(p.grid(), gaussian_profile);
  return pullback(Field(std::vector<ScalarField>(p.components(), g)), p);
}

Field randomized_profile(const Grid& grid, int m, std::uint64_t seed) {
  const ScalarField g = ScalarField::sample(grid, gaussian_profile);
  Field u(grid, m);
  const auto base = g.values();
  for (int i = 0; i < m; ++i) {
    auto ui = u.component(i);
    for (std::size_t n = 0; n < ui.size(); ++n) {
      const std::uint64_t counter = static_cast<std::uint64_t>(i) * grid.size() + n;
      ui[n] = base[n] * counter_uniform(seed, counter);
    }
  }
  return u;
}

Field randomized_initial(const Problem& p, std::uint64_t seed) {
  return pullback(randomized_profile(p.grid(), p.components(), seed), p);
}

Field initial_guess(const ScenarioSpec& spec, const Problem& p) {
  if (spec.initial.kind == InitialGuessSpec::Kind::randomized) {
    return randomized_initial(p, spec.initial.seed);
  }
  return gaussian_initial(p);
}

namespace {

ScenarioSpec harmonic_system(std::string name, int m, std::vector<double> g) {
  ScenarioSpec s;
  s.name = std::move(name);
  s.m = m;
  s.eps.assign(m, 1.0);
  s.potentials.assign(m, PotentialSpec::harmonic_plus_one(2.0));
  s.coupling = std::move(g);
  return s;
}

}  // namespace

ScenarioSpec example1(double g23) {
  return harmonic_system("example1", 3,
                         {2.0, 4.0, 4.0,
                          4.0, 4.0, g23,
                          4.0, g23, 6.0});
}

ScenarioSpec example2(double g34) {
  return harmonic_system("example2", 4,
                         {2.0, 4.0, 4.0, 4.0,
                          4.0, 4.0, 4.0, 4.0,
                          4.0, 4.0, 6.0, g34,
                          4.0, 4.0, g34, 8.0});
}

ScenarioSpec example3() {
  return harmonic_system("example3", 4,
                         {2.0, 4.0, 2.0, 2.0,
                          4.0, 4.0, 4.0, 4.0,
                          2.0, 4.0, 6.0, 8.0,
                          2.0, 4.0, 8.0, 8.0});
}

ScenarioSpec two_component_semitrivial(double omega1, double omega2, double g11,
                                       double g22, double g12) {
  ScenarioSpec s;
  s.name = "two_component";
  s.m = 2;
  s.eps = {1.0, 1.0};
  s.potentials = {PotentialSpec::constant(omega1), PotentialSpec::constant(omega2)};
  s.coupling = {g11, g12, g12, g22};
  return s;
}

ScenarioSpec gaussian_stirrer(double w, double delta, double xc1, double yc1,
                              double xc2, double yc2) {
  ScenarioSpec s;
  s.name = "stirrer";
  s.m = 2;
  s.eps = {1.0, 1.0};
  s.potentials = {PotentialSpec::gaussian_stirrer(w, delta, xc1, yc1),
                  PotentialSpec::gaussian_stirrer(w, delta, xc2, yc2)};
  s.coupling = {1.0, 10.0, 10.0, 3.0};
  s.initial.kind = InitialGuessSpec::Kind::randomized;
  return s;
}

ScenarioSpec singular_diffusion(double eps) {
  ScenarioSpec s;
  s.name = "singular";
  s.m = 2;
  s.eps = {eps, eps};
  s.potentials.assign(2, PotentialSpec::harmonic_plus_one(1.0));
  s.coupling = {1.0, 10.0, 10.0, 3.0};
  s.subdivisions = 128;
  return s;
}

const std::vector<ScenarioBuilder>& scenario_builders() {
  static const std::vector<ScenarioBuilder> builders = {
      {"example1", "three components, harmonic trap, variable g23", {{"g23", 6.0}},
       [](const ParamMap& q) { return example1(q.at("g23")); }},
      {"example2", "four components, harmonic trap, variable g34", {{"g34", 8.0}},
       [](const ParamMap& q) { return example2(q.at("g34")); }},
      {"example3", "four components with weaker 1-3 and 1-4 coupling", {},
       [](const ParamMap&) { return example3(); }},
      {"two_component", "two components with constant potentials",
       {{"omega1", 1.0}, {"omega2", 1.0}, {"g11", 1.0}, {"g22", 2.0}, {"g12", 2.0}},
       [](const ParamMap& q) {
         return two_component_semitrivial(q.at("omega1"), q.at("omega2"),
                                          q.at("g11"), q.at("g22"), q.at("g12"));
       }},
      {"stirrer", "two components, harmonic trap with Gaussian stirrers",
       {{"w", 10.0}, {"delta", 10.0}, {"xc1", 0.5}, {"yc1", 0.5},
        {"xc2", -0.5}, {"yc2", -0.5}, {"seed", 0.0}},
       [](const ParamMap& q) {
         ScenarioSpec s = gaussian_stirrer(q.at("w"), q.at("delta"), q.at("xc1"),
                                           q.at("yc1"), q.at("xc2"), q.at("yc2"));
         s.initial.seed = static_cast<std::uint64_t>(q.at("seed"));
         return s;
       }},
      {"singular", "two components with small diffusion", {{"eps", 0.01}},
       [](const ParamMap& q) { return singular_diffusion(q.at("eps")); }},
  };
  return builders;
}

const ScenarioBuilder& find_builder(const std::string& name) {
  for (const auto& b : scenario_builders()) {
    if (b.name == name) return b;
  }
  std::ostringstream msg;
  msg << "unknown scenario '" << name << "'; available:";
  for (const auto& b : scenario_builders()) msg << ' ' << b.name;
  throw std::invalid_argument(msg.str());
}

ScenarioSpec build_named(const std::string& name, const ParamMap& overrides) {
  const ScenarioBuilder& b = find_builder(name);
  ParamMap params = b.defaults;
  for (const auto& [key, value] : overrides) {
    if (!params.count(key)) {
      std::ostringstream msg;
      msg << "scenario '" << name << "' has no parameter '" << key << "'";
      if (b.defaults.empty()) {
        msg << " (it takes none)";
      } else {
        msg << "; known:";
        for (const auto& d : b.defaults) msg << ' ' << d.first;
      }
      throw std::invalid_argument(msg.str());
    }
    params[key] = value;
  }
  return b.build(params);
}

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::semi_trivial: return "semi-trivial";
    case SolutionClass::fully_nontrivial: return "nontrivial";
    case SolutionClass::degenerate: return "degenerate";
  }
  return "?";
}

Classification classify_solution(const Field& u, double rel_threshold) {
  Classification out;
  const double top = u.max_abs();
  int nontrivial = 0;
  for (int i = 0; i < u.components(); ++i) {
    const bool small = !(u.component_max_abs(i) >= rel_threshold * top) || top == 0.0;
    out.components.push_back(small ? ComponentClass::trivial
                                   : ComponentClass::nontrivial);
    if (!small) ++nontrivial;
  }
  if (nontrivial == 0) {
    out.overall = SolutionClass::degenerate;
  } else if (nontrivial == u.components()) {
    out.overall = SolutionClass::fully_nontrivial;
  } else {
    out.overall = SolutionClass::semi_trivial;
  }
  return out;
}

double symmetry_defect(const Field& u) {
  const int n = u.grid().nodes_per_axis();
  double worst = 0.0;
  for (int i = 0; i < u.components(); ++i) {
    const ScalarField f = u.component_field(i);
    const double scale = f.max_abs();
    if (scale == 0.0) continue;
    double d = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const double v = f(k, l);
        d = std::max(d, std::abs(v - f(n - 1 - k, l)));
        d = std::max(d, std::abs(v - f(k, n - 1 - l)));
        d = std::max(d, std::abs(v - f(l, k)));
      }
    }
    worst = std::max(worst, d / scale);
  }
  return worst;
}

int default_thread_count() {
  if (const char* env = std::getenv("NEHARI_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

SweepRow solve_point(const std::function<ScenarioSpec(const ParamMap&)>& builder,
                     const SweepPoint& point, const SweepSettings& settings) {
  SweepRow row;
  row.params = point.params;
  row.seed = point.seed;
  try {
    ScenarioSpec spec = builder(point.params);
    if (settings.half_width) spec.half_width = *settings.half_width;
    if (settings.subdivisions) spec.subdivisions = *settings.subdivisions;
    if (point.seed) {
      spec.initial.kind = InitialGuessSpec::Kind::randomized;
      spec.initial.seed = *point.seed;
    }
    const Problem p = build_problem(spec, settings.scaling);
    const SolveResult r = run(p, initial_guess(spec, p), settings.solver);
    row.ok = true;
    row.status = r.status;
    row.converged = r.converged;
    row.iterations = r.iterations;
    row.energy = r.history.back().energy;
    row.residual = r.history.back().residual;
    row.classification = classify_solution(r.final, settings.classify_threshold);
    row.symmetry_defect = symmetry_defect(r.final);
    for (int i = 0; i < r.final.components(); ++i) {
      row.component_max.push_back(r.final.component_max_abs(i));
    }
    if (!r.converged) row.error = r.message;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_coupling(
    const std::function<ScenarioSpec(const ParamMap&)>& builder,
    const std::vector<SweepPoint>& points, const SweepSettings& settings) {
  std::vector<SweepRow> rows(points.size());
  int threads = settings.threads > 0 ? settings.threads : default_thread_count();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      rows[k] = solve_point(builder, points[k], settings);
    }
  };
  if (threads == 1) {
    worker();
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace nehari
