#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nehari/commands.hpp"
#include "nehari/io.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  std::string algorithm;
  std::optional<double> alpha;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<int> mesh;
  bool compat_unscaled_ih = false;
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (overrides output.dir)");
  cmd->add_option("--algorithm", o.algorithm, "RSD, RAG or NMRAG");
  cmd->add_option("--alpha", o.alpha, "fixed step size");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap");
  cmd->add_option("--seed", o.seed, "randomized initial guess with this seed");
  cmd->add_option("--mesh", o.mesh, "subdivisions M per axis (even)");
  cmd->add_flag("--compat-unscaled-ih", o.compat_unscaled_ih,
                "drop the h^2 weight from the quartic functional");
}

nehari::RunConfig resolve(const Overrides& o) {
  nehari::RunConfig cfg = nehari::load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.algorithm.empty()) {
    auto a = nehari::parse_algorithm(o.algorithm);
    if (!a) throw nehari::ConfigError("unknown algorithm '" + o.algorithm + "'",
                                      std::nullopt, "--algorithm");
    cfg.solver.algorithm = *a;
    cfg.compare_algorithms = {*a};
  }
  if (o.alpha) cfg.solver.alpha = *o.alpha;
  if (o.max_iter) cfg.solver.max_iter = *o.max_iter;
  if (o.seed) cfg.solver.rng_seed = *o.seed;
  if (o.mesh) cfg.scenario.subdivisions = *o.mesh;
  if (o.compat_unscaled_ih) cfg.compat_unscaled_ih = true;
  nehari::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of coupled nonlinear Schroedinger systems on the Nehari manifold"};
  app.set_version_flag("--version", nehari::version());
  app.require_subcommand(1);

  Overrides solve_o, compare_o, sweep_o;
  auto* solve = app.add_subcommand("solve", "run one solver and write its artifacts");
  add_run_flags(solve, solve_o);
  auto* compare = app.add_subcommand("compare", "run several algorithms from one start");
  add_run_flags(compare, compare_o);
  auto* sweep = app.add_subcommand("sweep", "solve and classify over a parameter list");
  add_run_flags(sweep, sweep_o);

  nehari::VerifyOptions verify_o;
  bool verify_unscaled = false;
  auto* verify = app.add_subcommand("verify", "run the numerical self-checks");
  verify->add_option("--mesh", verify_o.subdivisions, "subdivisions M per axis");
  verify->add_option("--seed", verify_o.seed, "seed for the random test fields");
  verify->add_flag("--compat-unscaled-ih", verify_unscaled,
                   "check the unscaled quartic functional");

  auto* list = app.add_subcommand("scenarios", "list the named scenario builders");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return nehari::solve_command(resolve(solve_o), std::cout);
    if (*compare) return nehari::compare_command(resolve(compare_o), std::cout);
    if (*sweep) return nehari::sweep_command(resolve(sweep_o), std::cout);
    if (*verify) {
      if (verify_unscaled) verify_o.scaling = nehari::InteractionScaling::unscaled;
      return nehari::verify_command(verify_o, std::cout);
    }
    if (*list) {
      for (const auto& b : nehari::scenario_builders()) {
        std::cout << b.name << ": " << b.description;
        for (const auto& [k, v] : b.defaults) std::cout << ' ' << k << '=' << v;
        std::cout << '\n';
      }
      return 0;
    }
  } catch (const nehari::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
