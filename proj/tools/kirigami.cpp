#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "kirigami/config.hpp"
#include "kirigami/run.hpp"

namespace {

// Every flag funnels through the same key=value path as the config file, so
// semantics stay identical. `--case` is applied first (presets pre-fill),
// then the config file, then the remaining flags.
struct Options {
  std::string config_path;
  std::string case_name;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_options(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config_path, "config file (key = value lines)");
  cmd->add_option("--case", opts.case_name, "auxetic | non_auxetic | mixed | custom");

  auto keyed = [&opts, cmd](const std::string& flag, const std::string& key,
                            const std::string& help) {
    cmd->add_option_function<std::string>(
           flag, [&opts, key](const std::string& v) { opts.overrides.emplace_back(key, v); },
           help)
        ->expected(1);
  };
  keyed("--alpha", "alpha", "material parameter alpha (<= 0)");
  keyed("--beta", "beta", "material parameter beta (>= 0)");
  keyed("--epsilon", "epsilon", "regularization parameter (>= 0)");
  keyed("--nx", "nx", "grid cells in x");
  keyed("--ny", "ny", "grid cells in y");
  keyed("--L", "L", "domain side length");
  keyed("--xi-minus", "xi_minus", "cut-off lower bound");
  keyed("--xi-plus", "xi_plus", "cut-off upper bound");
  keyed("--dirichlet-constant", "dirichlet_constant", "constant slit opening on both sides");
  keyed("--dirichlet-ramp", "dirichlet_ramp", "left,right slit opening values");
  keyed("--neumann", "neumann", "constant conormal flux on top/bottom");
  keyed("--r-tol", "r_tol", "relative residual tolerance");
  keyed("--a-tol", "a_tol", "absolute residual floor");
  keyed("--max-iterations", "max_iterations", "nonlinear iteration cap");
  keyed("--solver", "solver", "newton | picard");
  keyed("--quadrature-order", "quadrature_order", "triangle quadrature order");
  keyed("--output-prefix", "output_prefix", "artifact path prefix");
  keyed("--levels", "levels", "study refinement levels (>= 3)");
  keyed("--epsilons", "epsilons", "sweep values, comma separated");
  cmd->add_flag_callback(
      "--manufactured",
      [&opts] { opts.overrides.emplace_back("manufactured", "true"); },
      "study the frozen-coefficient exact-solution case");
}

kirigami::RunConfig make_config(const Options& opts) {
  kirigami::RunConfig cfg;
  if (!opts.case_name.empty()) kirigami::apply_key_value(cfg, "case", opts.case_name);
  if (!opts.config_path.empty()) kirigami::apply_config_file(cfg, opts.config_path);
  for (const auto& [key, value] : opts.overrides) kirigami::apply_key_value(cfg, key, value);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element solver for rhombi-slit kirigami slit-opening fields"};
  app.require_subcommand(1);

  Options run_opts, study_opts, sweep_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "solve one case and export fields");
  add_common_options(run_cmd, run_opts);
  CLI::App* study_cmd = app.add_subcommand("study", "mesh refinement study");
  add_common_options(study_cmd, study_opts);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep");
  add_common_options(sweep_cmd, sweep_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return kirigami::run_case(make_config(run_opts), std::cout);
    if (study_cmd->parsed())
      return kirigami::convergence_study(make_config(study_opts), std::cout);
    if (sweep_cmd->parsed()) return kirigami::epsilon_sweep(make_config(sweep_opts), std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
